#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <random>

#include "fixtures.hpp"

using namespace compass;
using namespace fixtures;

namespace {

const ErrorModel kModel;

Catalog abc_catalog(uint64_t rows = 100000, uint64_t seed = 19) {
  return catalog_of(
      synth("t", rows, seed,
            {int_col("a", 500, 1.0), int_col("b", 80), int_col("c", 2000, 0.5)}),
      {{"a", "b"}, {"a", "b", "c"}});
}

}  // namespace

TEST_CASE("plan_greedy: a lone target with no deductions gets sampled") {
  Catalog cat = abc_catalog();
  const std::vector<IndexDef> targets{index_on("t", {"a"}, Method::kNs)};
  const EstimationPlan plan =
      plan_greedy(targets, {}, {0.5, 0.9}, default_f_grid(), cat, kModel);
  REQUIRE(plan.feasible);
  const PlanNode* node = plan.find(targets[0].signature());
  REQUIRE(node != nullptr);
  CHECK(node->state == PlanNode::State::kSampled);
  CHECK(plan.total_cost > 0);
}

TEST_CASE("plan_greedy: {I_AB, I_ABC} samples AB and C, deduces ABC") {
  Catalog cat = abc_catalog();
  const IndexDef ab = index_on("t", {"a", "b"}, Method::kNs);
  const IndexDef abc = index_on("t", {"a", "b", "c"}, Method::kNs);
  const EstimationPlan plan =
      plan_greedy({abc, ab}, {}, {0.5, 0.9}, default_f_grid(), cat, kModel);
  REQUIRE(plan.feasible);

  const PlanNode* nab = plan.find(ab.signature());
  REQUIRE(nab != nullptr);
  CHECK(nab->state == PlanNode::State::kSampled);

  const PlanNode* nabc = plan.find(abc.signature());
  REQUIRE(nabc != nullptr);
  CHECK(nabc->state == PlanNode::State::kDeduced);
  REQUIRE(nabc->ded_children.size() == 2);
  CHECK(nabc->ded_children[0] == ab.signature());

  const PlanNode* nc = plan.find(index_on("t", {"c"}, Method::kNs).signature());
  REQUIRE(nc != nullptr);
  CHECK(nc->state == PlanNode::State::kSampled);

  // Cheaper than sampling everything at the same fraction.
  CHECK(plan.total_cost < all_sampled_cost({abc, ab}, plan.f, cat));
}

TEST_CASE("plan_greedy: existing index feeds a free ColSet deduction") {
  Catalog cat = abc_catalog();
  const IndexDef ba = index_on("t", {"b", "a"}, Method::kNs);
  const IndexDef ab = index_on("t", {"a", "b"}, Method::kNs);
  const EstimationPlan plan =
      plan_greedy({ab}, {{ba, 123.0}}, {0.5, 0.9}, default_f_grid(), cat, kModel);
  REQUIRE(plan.feasible);
  const PlanNode* node = plan.find(ab.signature());
  REQUIRE(node != nullptr);
  CHECK(node->state == PlanNode::State::kDeduced);
  CHECK(node->ded_children == std::vector<std::string>{ba.signature()});
  CHECK(plan.total_cost == 0);
}

TEST_CASE("plan_greedy: impossible accuracy combination is reported, not relaxed") {
  Catalog cat = abc_catalog();
  const std::vector<IndexDef> targets{index_on("t", {"b", "a"}, Method::kPage)};
  const EstimationPlan plan =
      plan_greedy(targets, {}, {0.01, 0.999}, default_f_grid(), cat, kModel);
  CHECK_FALSE(plan.feasible);
  CHECK_FALSE(plan.infeasible_reason.empty());
}

TEST_CASE("plan_greedy: every plan satisfies the accuracy constraint") {
  Catalog cat = abc_catalog();
  std::vector<IndexDef> targets{
      index_on("t", {"a"}, Method::kNs),        index_on("t", {"b"}, Method::kPage),
      index_on("t", {"a", "b"}, Method::kNs),   index_on("t", {"b", "a"}, Method::kNs),
      index_on("t", {"a", "b", "c"}, Method::kNs)};
  for (const auto& [e, q] : std::vector<std::pair<double, double>>{
           {0.5, 0.9}, {0.3, 0.85}, {0.2, 0.8}}) {
    const EstimationPlan plan =
        plan_greedy(targets, {}, {e, q}, default_f_grid(), cat, kModel);
    REQUIRE(plan.feasible);
    for (const auto& node : plan.nodes)
      if (node.is_target) CHECK(node.prob >= q);
  }
}

TEST_CASE("plan_exact: two-leaf choice takes the cheaper of sample vs deduce") {
  Catalog cat = abc_catalog();
  const IndexDef ab = index_on("t", {"a", "b"}, Method::kNs);
  const EstimationPlan exact =
      plan_exact({ab}, {}, {0.5, 0.9}, {0.05}, cat, kModel);
  REQUIRE(exact.feasible);

  // Options: sample AB directly, or sample A and B and extrapolate. Verify
  // the planner picked the cheaper side by costing both by hand.
  const double direct = all_sampled_cost({ab}, 0.05, cat);
  const double via_parts =
      all_sampled_cost({index_on("t", {"a"}, Method::kNs), index_on("t", {"b"}, Method::kNs)},
                       0.05, cat);
  CHECK(exact.total_cost == doctest::Approx(std::min(direct, via_parts)));
}

TEST_CASE("plan_exact: never worse than greedy, and greedy stays within 1.3x") {
  // Instance family shaped like real candidate sets: nested key prefixes
  // (seek index plus its widening extensions) with occasional permuted
  // twins, the shapes the advisor actually emits.
  std::mt19937_64 rng(2024);
  Catalog cat = catalog_of(
      synth("t", 80000, 3,
            {int_col("a", 300, 1.0), int_col("b", 60), int_col("c", 900), int_col("d", 25)}),
      {{"a", "b"}, {"a", "c"}, {"b", "c"}, {"a", "b", "c"}, {"a", "b", "d"}, {"a", "b", "c", "d"},
       {"b", "d"}, {"a", "d"}, {"c", "d"}, {"b", "c", "d"}, {"a", "c", "d"}});
  const std::vector<std::string> cols{"a", "b", "c", "d"};

  int checked = 0;
  for (int inst = 0; inst < 20; ++inst) {
    std::vector<std::string> order = cols;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<IndexDef> targets;
    const size_t longest = 3 + rng() % 2;
    for (size_t len = 2; len <= longest; ++len)
      targets.push_back(
          index_on("t", std::vector<std::string>(order.begin(), order.begin() + len),
                   Method::kNs));
    if (rng() % 2) {
      // Permuted twin of the shortest prefix (a ColSet opportunity).
      std::vector<std::string> twin{order[1], order[0]};
      targets.push_back(index_on("t", twin, Method::kNs));
    }
    const AccuracyRequirement req{0.2 + 0.3 * (inst % 3), 0.85};
    const std::vector<double> grid{0.02, 0.05, 0.1};
    const EstimationPlan greedy = plan_greedy(targets, {}, req, grid, cat, kModel);
    const EstimationPlan exact = plan_exact(targets, {}, req, grid, cat, kModel);
    REQUIRE(greedy.feasible == exact.feasible);
    if (!greedy.feasible) continue;
    ++checked;
    CHECK(exact.total_cost <= greedy.total_cost + 1e-9);
    if (exact.total_cost > 0) CHECK(greedy.total_cost <= 1.3 * exact.total_cost + 1e-9);
  }
  CHECK(checked >= 15);
}

TEST_CASE("plan_exact: oversized subgraphs are refused") {
  Catalog cat = abc_catalog();
  // Many same-table NS composites connected through shared singletons blow
  // past the cluster guard.
  std::vector<IndexDef> targets;
  const std::vector<std::string> cols{"a", "b", "c"};
  for (size_t i = 0; i < cols.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j) {
      if (i == j) continue;
      targets.push_back(index_on("t", {cols[i], cols[j]}, Method::kNs));
      IndexDef withc = index_on("t", {cols[i], cols[j]}, Method::kNs);
      withc.included_columns = {cols[3 - i - j]};
      targets.push_back(withc);
    }
  CHECK_THROWS_AS(plan_exact(targets, {}, {0.5, 0.9}, {0.05}, cat, kModel), Error);
}

TEST_CASE("execute_plan: existing indexes come back exact at zero cost") {
  Catalog cat = abc_catalog();
  const IndexDef ba = index_on("t", {"b", "a"}, Method::kNs);
  const IndexDef ab = index_on("t", {"a", "b"}, Method::kNs);
  const EstimationPlan plan =
      plan_greedy({ab}, {{ba, 321.0}}, {0.5, 0.9}, default_f_grid(), cat, kModel);
  REQUIRE(plan.feasible);
  CHECK(plan.total_cost == 0);

  SampleManager samples(cat, 77);
  const auto estimates = execute_plan(plan, cat, samples, kModel);
  const SizeEstimate& existing = estimates.at(ba.signature());
  CHECK(existing.provenance == Provenance::kExact);
  CHECK(existing.pages == 321.0);
  CHECK(existing.err_var == 0.0);
  const SizeEstimate& deduced = estimates.at(ab.signature());
  CHECK(deduced.provenance == Provenance::kDeduced);
  CHECK(deduced.pages == doctest::Approx(321.0));
}

TEST_CASE("execute_plan: deduced targets carry more variance than their inputs") {
  Catalog cat = abc_catalog();
  const IndexDef ab = index_on("t", {"a", "b"}, Method::kNs);
  const IndexDef abc = index_on("t", {"a", "b", "c"}, Method::kNs);
  const EstimationPlan plan =
      plan_greedy({abc, ab}, {}, {0.5, 0.9}, default_f_grid(), cat, kModel);
  REQUIRE(plan.feasible);
  SampleManager samples(cat, 5);
  const auto estimates = execute_plan(plan, cat, samples, kModel);
  CHECK(estimates.at(abc.signature()).err_var > estimates.at(ab.signature()).err_var);
}

TEST_CASE("execute_plan: estimates land near full builds") {
  Catalog cat = abc_catalog(30000, 8);
  const Table& t = cat.table("t");
  std::vector<IndexDef> targets{
      index_on("t", {"a"}, Method::kNs), index_on("t", {"a", "b"}, Method::kNs),
      index_on("t", {"a", "b", "c"}, Method::kNs), index_on("t", {"b", "a"}, Method::kPage)};
  const EstimationPlan plan = plan_greedy(targets, {}, {0.5, 0.9}, {0.05, 0.1}, cat, kModel);
  REQUIRE(plan.feasible);
  SampleManager samples(cat, 99);
  const auto estimates = execute_plan(plan, cat, samples, kModel);
  for (const auto& def : targets) {
    const double actual = built_pages(build_index(t, def));
    const double est = estimates.at(def.signature()).pages;
    CHECK(std::abs(est / actual - 1.0) < 0.2);
  }
}

TEST_CASE("plan_greedy: 300 targets plan in under a second") {
  // Wide analytics-style table: 12 columns, mixed skews.
  std::vector<SyntheticColumnSpec> cols;
  for (int i = 0; i < 12; ++i)
    cols.push_back(int_col("c" + std::to_string(i), 50 + 37 * i, i % 3 ? 0.0 : 1.0));
  Catalog cat;
  cat.add(synth("li", 20000, 4, cols));
  std::vector<std::vector<std::string>> groups;
  std::vector<IndexDef> targets;
  std::mt19937_64 rng(8);
  while (targets.size() < 300) {
    std::vector<std::string> keys;
    const size_t len = 1 + rng() % 4;
    std::set<size_t> used;
    while (used.size() < len) used.insert(rng() % 12);
    for (size_t u : used) keys.push_back("c" + std::to_string(u));
    IndexDef def = index_on("li", keys, rng() % 2 ? Method::kNs : Method::kGdict);
    if (std::none_of(targets.begin(), targets.end(), [&](const IndexDef& d) {
          return d.signature() == def.signature();
        })) {
      targets.push_back(def);
      for (size_t l = 2; l <= keys.size(); ++l)
        groups.emplace_back(keys.begin(), keys.begin() + l);
    }
  }
  cat.stats["li"] = compute_stats(cat.table("li"), groups);

  const auto start = std::chrono::steady_clock::now();
  const EstimationPlan plan =
      plan_greedy(targets, {}, {0.5, 0.9}, default_f_grid(), cat, kModel);
  const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);
  REQUIRE(plan.feasible);
  CHECK(elapsed.count() < 1.0);
}
