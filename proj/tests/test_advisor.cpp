#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "fixtures.hpp"

using namespace compass;
using namespace fixtures;

namespace {

/// Scripted cost oracle: explicit workload cost per member-name subset.
struct MockScenario {
  std::map<std::string, ConfiguredIndex> members;  // short name -> candidate
  std::map<std::set<std::string>, double> costs;
  double base = 0;

  void add(const std::string& name, double size, Method method = Method::kNone,
           std::vector<std::string> keys = {}) {
    IndexDef def;
    def.table = "m";
    def.key_columns = keys.empty() ? std::vector<std::string>{name} : keys;
    def.method = method;
    members[name] = ConfiguredIndex{def, SizeEstimate::exact(size)};
  }

  std::vector<ConfiguredIndex> pool() const {
    std::vector<ConfiguredIndex> out;
    for (const auto& [_, ci] : members) out.push_back(ci);
    return out;
  }

  std::string name_of(const std::string& signature) const {
    for (const auto& [name, ci] : members)
      if (ci.def.signature() == signature) return name;
    return "?";
  }

  CostOracle oracle() const {
    return [this](const Configuration& cfg) {
      std::set<std::string> names;
      for (const auto& ci : cfg.indexes) names.insert(name_of(ci.def.signature()));
      const auto it = costs.find(names);
      if (it != costs.end()) return it->second;
      // Unlisted subsets: best listed subset cost (extra members never hurt).
      double best = base;
      for (const auto& [subset, cost] : costs) {
        if (std::includes(names.begin(), names.end(), subset.begin(), subset.end()))
          best = std::min(best, cost);
      }
      return best;
    };
  }
};

Catalog sales_catalog(uint64_t rows = 20000, uint64_t seed = 31) {
  return catalog_of(synth("sales", rows, seed,
                          {int_col("shipdate", 1000), int_col("state", 50),
                           int_col("price", 4000, 1.0), int_col("discount", 10)}));
}

SelectStatement example_query() {
  SelectStatement s;
  s.table = "sales";
  s.predicates = {pred_between("shipdate", 100, 200), pred_eq("state", 7)};
  s.columns = {"price", "discount"};
  s.aggregate = "sum";
  return s;
}

}  // namespace

TEST_CASE("generate_candidates: seek and covering shapes in every method") {
  Catalog cat = sales_catalog();
  const auto cands = generate_candidates(example_query(), cat);

  auto has = [&](const IndexDef& def) {
    return std::any_of(cands.begin(), cands.end(), [&](const IndexDef& d) {
      return d.signature() == def.signature();
    });
  };
  for (Method m : {Method::kNone, Method::kNs, Method::kPage}) {
    CHECK(has(index_on("sales", {"shipdate", "state"}, m)));
    CHECK(has(index_on("sales", {"shipdate", "state"}, m, {"price", "discount"})));
  }
  // No GDICT candidates unless asked for.
  CHECK(std::none_of(cands.begin(), cands.end(),
                     [](const IndexDef& d) { return d.method == Method::kGdict; }));
}

TEST_CASE("generate_candidates: candidate count is shapes times methods") {
  Catalog cat = sales_catalog();
  const auto cands = generate_candidates(example_query(), cat);
  // Two predicate columns -> two leads; per lead: seek, covering, partial,
  // clustered. All shapes are distinct here, times 3 methods.
  CHECK(cands.size() == 2 * 4 * 3);
  std::set<std::string> sigs;
  for (const auto& d : cands) sigs.insert(d.signature());
  CHECK(sigs.size() == cands.size());

  const auto with_gdict = generate_candidates(example_query(), cat, true);
  CHECK(with_gdict.size() == 2 * 4 * 4);
}

TEST_CASE("generate_candidates: no predicates leaves only clustered shapes") {
  Catalog cat = sales_catalog();
  SelectStatement whole;
  whole.table = "sales";
  whole.columns = {"shipdate", "state", "price", "discount"};
  const auto cands = generate_candidates(whole, cat);
  CHECK_FALSE(cands.empty());
  for (const auto& d : cands) CHECK(d.clustered);
}

TEST_CASE("select_candidates: dominance basics") {
  auto cc = [](double cost, double size) {
    CandidateConfig c;
    IndexDef def;
    def.table = "m";
    def.key_columns = {"k" + std::to_string(static_cast<int>(cost * 100 + size))};
    c.config.add(ConfiguredIndex{def, SizeEstimate::exact(size)});
    c.cost = cost;
    c.size = size;
    return c;
  };
  const auto single = select_candidates({cc(10, 10)}, SelectionMode::kSkyline);
  CHECK(single.size() == 1);

  // (12, 11) is dominated by (10, 10).
  const auto culled = select_candidates({cc(10, 10), cc(12, 11)}, SelectionMode::kSkyline);
  REQUIRE(culled.size() == 1);
  CHECK(culled[0].cost == 10);

  // Incomparable points both stay.
  const auto frontier = select_candidates({cc(10, 10), cc(8, 20)}, SelectionMode::kSkyline);
  CHECK(frontier.size() == 2);

  const auto topk = select_candidates({cc(10, 10), cc(8, 20), cc(9, 5)}, SelectionMode::kTopK, 2);
  REQUIRE(topk.size() == 2);
  CHECK(topk[0].cost == 8);
  CHECK(topk[1].cost == 9);
}

TEST_CASE("select_candidates: skyline equals the brute-force Pareto frontier") {
  std::mt19937_64 rng(99);
  for (int iter = 0; iter < 30; ++iter) {
    std::vector<CandidateConfig> configs;
    const int n = 1 + static_cast<int>(rng() % 100);
    for (int i = 0; i < n; ++i) {
      CandidateConfig c;
      IndexDef def;
      def.table = "m";
      def.key_columns = {"k" + std::to_string(i)};
      c.cost = static_cast<double>(rng() % 50);
      c.size = static_cast<double>(rng() % 50);
      c.config.add(ConfiguredIndex{def, SizeEstimate::exact(c.size)});
      configs.push_back(std::move(c));
    }
    const auto skyline = select_candidates(configs, SelectionMode::kSkyline);

    // Brute force: keep exactly the non-dominated points.
    std::set<std::string> expect;
    for (const auto& a : configs) {
      bool dominated = false;
      for (const auto& b : configs) {
        const bool le = b.cost <= a.cost && b.size <= a.size;
        const bool strict = b.cost < a.cost || b.size < a.size;
        const bool same = &a == &b;
        if (!same && le && strict) dominated = true;
      }
      if (!dominated) expect.insert(a.config.indexes[0].def.signature());
    }
    std::set<std::string> got;
    for (const auto& c : skyline) got.insert(c.config.indexes[0].def.signature());
    CHECK(got == expect);
  }
}

TEST_CASE("enumerate: zero budget returns the empty configuration") {
  MockScenario s;
  s.base = 20;
  s.add("B", 10);
  s.costs[{}] = 20;
  s.costs[{"B"}] = 10;
  const Configuration cfg = enumerate(s.pool(), s.oracle(), 0, EnumerationMode::kPure);
  CHECK(cfg.indexes.empty());
}

TEST_CASE("enumerate: density trace follows the competing-index walkthrough") {
  // Benefits 10, 8, 5 over sizes 10, 5, 10 with budget 15: densities
  // 1, 1.6 and 0.5, so the compressed C goes first, then C itself.
  MockScenario s;
  s.base = 20;
  s.add("B", 10);
  s.add("Cc", 5, Method::kNs, {"C"});
  s.add("C", 10, Method::kNone, {"C"});
  s.costs[{}] = 20;
  s.costs[{"B"}] = 10;
  s.costs[{"Cc"}] = 12;
  s.costs[{"C"}] = 15;
  s.costs[{"B", "Cc"}] = 10;
  s.costs[{"B", "C"}] = 5;
  s.costs[{"Cc", "C"}] = 7;
  s.costs[{"B", "Cc", "C"}] = 5;

  std::vector<TraceStep> trace;
  const Configuration cfg = enumerate(s.pool(), s.oracle(), 15, EnumerationMode::kDensity, &trace);

  REQUIRE(trace.size() >= 2);
  CHECK(s.name_of(trace[0].index) == "Cc");
  CHECK(trace[0].density == doctest::Approx(1.6));
  CHECK(s.name_of(trace[1].index) == "C");

  // First-step densities match the walkthrough: 10/10, 8/5, 5/10.
  std::map<std::string, double> densities;
  for (const auto& e : trace[0].evals) densities[s.name_of(e.signature)] = e.density;
  CHECK(densities.at("B") == doctest::Approx(1.0));
  CHECK(densities.at("Cc") == doctest::Approx(1.6));
  CHECK(densities.at("C") == doctest::Approx(0.5));

  CHECK(cfg.contains(s.members.at("Cc").def.signature()));
  CHECK(cfg.contains(s.members.at("C").def.signature()));
  CHECK(cfg.total_pages() == doctest::Approx(15));
}

TEST_CASE("enumerate: pure greedy stalls where backtracking recovers") {
  // Pure greedy grabs B and gets stuck; the oversized pick of C is
  // recoverable by swapping B for its compressed variant.
  MockScenario s;
  s.base = 20;
  s.add("B", 10, Method::kNone, {"B"});
  s.add("Bc", 5, Method::kNs, {"B"});
  s.add("C", 10, Method::kNone, {"C"});
  s.add("Cc", 5, Method::kNs, {"C"});
  s.costs[{}] = 20;
  s.costs[{"B"}] = 10;
  s.costs[{"Bc"}] = 12;
  s.costs[{"C"}] = 15;
  s.costs[{"Cc"}] = 17;
  s.costs[{"B", "C"}] = 5;
  s.costs[{"B", "Cc"}] = 10;
  s.costs[{"Bc", "C"}] = 7;
  s.costs[{"Bc", "Cc"}] = 12;
  s.costs[{"B", "Bc"}] = 10;
  s.costs[{"C", "Cc"}] = 15;

  const Configuration pure = enumerate(s.pool(), s.oracle(), 15, EnumerationMode::kPure);
  REQUIRE(pure.indexes.size() == 1);
  CHECK(s.name_of(pure.indexes[0].def.signature()) == "B");
  CHECK(s.oracle()(pure) == doctest::Approx(10));

  std::vector<TraceStep> trace;
  const Configuration back =
      enumerate(s.pool(), s.oracle(), 15, EnumerationMode::kBacktrack, &trace);
  CHECK(s.oracle()(back) == doctest::Approx(7));
  CHECK(back.total_pages() <= 15);
  CHECK(std::any_of(trace.begin(), trace.end(),
                    [](const TraceStep& t) { return t.action == "backtrack"; }));
  // Strictly better than the pure-greedy stall.
  CHECK(s.oracle()(back) < s.oracle()(pure));
}

TEST_CASE("enumerate: backtracking stays near the exhaustive optimum") {
  // Competing-index scenarios: each query takes the best saving among the
  // chosen members; compressed variants save a bit less but are smaller.
  std::mt19937_64 rng(4242);
  for (int scenario = 0; scenario < 20; ++scenario) {
    const int queries = 3 + static_cast<int>(rng() % 3);
    const int shapes = 3 + static_cast<int>(rng() % 3);  // 6-12 candidates

    struct Cand {
      std::string name;
      double size;
      std::vector<double> savings;
    };
    std::vector<Cand> cands;
    double base = 0;
    std::vector<double> base_costs(queries);
    for (int q = 0; q < queries; ++q) {
      base_costs[q] = 20 + static_cast<double>(rng() % 40);
      base += base_costs[q];
    }
    for (int i = 0; i < shapes; ++i) {
      Cand plain;
      plain.name = "i" + std::to_string(i);
      plain.size = 10 + static_cast<double>(rng() % 30);
      for (int q = 0; q < queries; ++q) {
        const bool helps = rng() % 2 == 0;
        plain.savings.push_back(helps ? base_costs[q] * (0.3 + 0.1 * (rng() % 5)) : 0.0);
      }
      Cand comp = plain;
      comp.name = plain.name + "c";
      comp.size = plain.size * 0.4;
      for (auto& s : comp.savings) s *= 0.8;
      cands.push_back(plain);
      cands.push_back(comp);
    }

    std::vector<ConfiguredIndex> pool;
    std::map<std::string, const Cand*> by_sig;
    for (size_t i = 0; i < cands.size(); ++i) {
      IndexDef def;
      def.table = "m";
      def.key_columns = {cands[i].name.substr(0, 2)};
      def.method = cands[i].name.back() == 'c' ? Method::kNs : Method::kNone;
      ConfiguredIndex ci{def, SizeEstimate::exact(cands[i].size)};
      by_sig[def.signature()] = &cands[i];
      pool.push_back(std::move(ci));
    }
    const CostOracle oracle = [&](const Configuration& cfg) {
      double total = 0;
      for (int q = 0; q < queries; ++q) {
        double best = 0;
        for (const auto& ci : cfg.indexes)
          best = std::max(best, by_sig.at(ci.def.signature())->savings[q]);
        total += base_costs[q] - best;
      }
      return total;
    };

    double total_size = 0;
    for (const auto& c : cands) total_size += c.size;
    const double budget = total_size * (0.25 + 0.05 * (rng() % 5));

    const Configuration got =
        enumerate(pool, oracle, budget, EnumerationMode::kBacktrack);

    // Exhaustive optimum over all in-budget subsets.
    double best = base;
    const size_t n = pool.size();
    for (size_t mask = 0; mask < (1ull << n); ++mask) {
      Configuration cfg;
      double size = 0;
      for (size_t i = 0; i < n; ++i)
        if (mask & (1ull << i)) {
          size += pool[i].size.pages;
          cfg.indexes.push_back(pool[i]);
        }
      if (size > budget) continue;
      best = std::min(best, oracle(cfg));
    }
    CHECK(oracle(got) <= 1.2 * best + 1e-9);
    CHECK(got.total_pages() <= budget + 1e-9);
  }
}

TEST_CASE("tune: the worked staging example picks the compressed covering index") {
  Catalog cat = sales_catalog(300000, 31);
  Workload workload{Statement{example_query()}};

  AdvisorOptions options;
  options.budget_pages = 12800;  // 100 MB at 8 KB pages
  options.selection = SelectionMode::kSkyline;
  options.enumeration = EnumerationMode::kBacktrack;

  // Pin the four book sizes (95/170/50/90 MB as pages); every other shape
  // is priced out of the budget.
  const std::string i1 = index_on("sales", {"shipdate", "state"}, Method::kNone).signature();
  const std::string i2 =
      index_on("sales", {"shipdate", "state"}, Method::kNone, {"price", "discount"}).signature();
  const std::string i1c = index_on("sales", {"shipdate", "state"}, Method::kNs).signature();
  const std::string i2c =
      index_on("sales", {"shipdate", "state"}, Method::kNs, {"price", "discount"}).signature();
  for (const auto& def : generate_candidates(example_query(), cat))
    options.size_overrides[def.signature()] = 1e6;
  options.size_overrides[i1] = 12160;
  options.size_overrides[i2] = 21760;
  options.size_overrides[i1c] = 6400;
  options.size_overrides[i2c] = 11520;

  const CostModelParams params;
  const ErrorModel model;
  const Recommendation integrated = tune(workload, cat, options, params, model);
  CHECK(integrated.config.contains(i2c));
  CHECK(integrated.config.total_pages() <= options.budget_pages);

  AdvisorOptions staged = options;
  staged.staged = true;
  const Recommendation decoupled = tune(workload, cat, staged, params, model);
  CHECK_FALSE(decoupled.config.contains(i2c));
  CHECK(decoupled.cost_after > integrated.cost_after);
}

TEST_CASE("tune: integrated never loses to staged on a generous budget") {
  Catalog cat = sales_catalog(30000, 7);
  Workload workload{Statement{example_query()}};
  SelectStatement q2;
  q2.table = "sales";
  q2.predicates = {pred_eq("price", 100)};
  q2.columns = {"state"};
  workload.push_back(Statement{q2});

  AdvisorOptions options;
  options.budget_pages = 1e6;
  options.accuracy = {0.5, 0.9};
  const CostModelParams params;
  const ErrorModel model;
  const Recommendation integrated = tune(workload, cat, options, params, model);

  AdvisorOptions staged_opts = options;
  staged_opts.staged = true;
  Catalog cat2 = sales_catalog(30000, 7);
  const Recommendation staged = tune(workload, cat2, staged_opts, params, model);

  CHECK(integrated.cost_after <= staged.cost_after + 1e-9);
  CHECK(integrated.config.total_pages() <= options.budget_pages);
  CHECK(staged.config.total_pages() <= options.budget_pages);
}

TEST_CASE("tune: insert weight steers compression down, never above compress-everything") {
  const CostModelParams params;
  const ErrorModel model;

  size_t prev_compressed = SIZE_MAX;
  for (double weight : {0.0, 2.0, 10.0, 50.0, 250.0}) {
    Workload workload{Statement{example_query()}};
    InsertStatement ins;
    ins.table = "sales";
    ins.rows_per_exec = 1000;
    ins.weight = weight;
    workload.push_back(Statement{ins});

    Catalog cat_run = sales_catalog(30000, 12);
    AdvisorOptions options;
    options.budget_pages = 1e6;
    const Recommendation rec = tune(workload, cat_run, options, params, model);

    size_t compressed = 0;
    for (const auto& ci : rec.config.indexes)
      if (ci.def.method != Method::kNone) ++compressed;
    CHECK(compressed <= prev_compressed);
    prev_compressed = compressed;

    // Compress-everything baseline: force the best compressed variant of
    // every member; the recommendation must not cost more.
    Configuration forced;
    bool all_swappable = true;
    for (const auto& ci : rec.config.indexes) {
      if (ci.def.method != Method::kNone) {
        forced.add(ci);
        continue;
      }
      IndexDef ns = ci.def;
      ns.method = Method::kNs;
      EstimationPlan plan =
          plan_greedy({ns}, {}, options.accuracy, options.f_grid, cat_run, model);
      if (!plan.feasible) {
        all_swappable = false;
        break;
      }
      SampleManager samples(cat_run, options.seed);
      const auto ests = execute_plan(plan, cat_run, samples, model);
      forced.add(ConfiguredIndex{ns, ests.at(ns.signature())});
    }
    if (all_swappable) {
      const double rec_cost = workload_cost(workload, rec.config, cat_run, params);
      const double forced_cost = workload_cost(workload, forced, cat_run, params);
      CHECK(rec_cost <= forced_cost + 1e-9);
    }
  }
}

TEST_CASE("tune: deterministic for a fixed seed") {
  const CostModelParams params;
  const ErrorModel model;
  auto run = [&] {
    Catalog cat = sales_catalog(20000, 3);
    Workload workload{Statement{example_query()}};
    AdvisorOptions options;
    options.budget_pages = 5000;
    options.seed = 1234;
    return tune(workload, cat, options, params, model);
  };
  const Recommendation r1 = run();
  const Recommendation r2 = run();
  REQUIRE(r1.config.indexes.size() == r2.config.indexes.size());
  for (size_t i = 0; i < r1.config.indexes.size(); ++i) {
    CHECK(r1.config.indexes[i].def.signature() == r2.config.indexes[i].def.signature());
    CHECK(r1.config.indexes[i].size.pages == r2.config.indexes[i].size.pages);
  }
  CHECK(r1.cost_after == r2.cost_after);
}

TEST_CASE("tune: enumeration cost is non-increasing across accepted steps") {
  Catalog cat = sales_catalog(30000, 9);
  Workload workload{Statement{example_query()}};
  AdvisorOptions options;
  options.budget_pages = 100000;
  const Recommendation rec = tune(workload, cat, options, CostModelParams{}, ErrorModel{});
  double last = rec.cost_before;
  for (const auto& step : rec.trace) {
    if (step.action == "stop") continue;
    CHECK(step.cost_after <= last + 1e-9);
    last = step.cost_after;
  }
}
