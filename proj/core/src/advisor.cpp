#include "compass/advisor.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace compass {

namespace {
constexpr double kBudgetEps = 1e-9;
}

SelectionMode parse_selection_mode(std::string_view s) {
  if (s == "skyline") return SelectionMode::kSkyline;
  if (s == "topk" || s.rfind("topk:", 0) == 0) return SelectionMode::kTopK;
  fail("unknown selection mode '" + std::string(s) + "'");
}

EnumerationMode parse_enumeration_mode(std::string_view s) {
  if (s == "pure") return EnumerationMode::kPure;
  if (s == "density") return EnumerationMode::kDensity;
  if (s == "backtrack") return EnumerationMode::kBacktrack;
  fail("unknown enumeration mode '" + std::string(s) + "'");
}

std::string enumeration_mode_name(EnumerationMode m) {
  switch (m) {
    case EnumerationMode::kPure: return "pure";
    case EnumerationMode::kDensity: return "density";
    case EnumerationMode::kBacktrack: return "backtrack";
  }
  return "?";
}

std::vector<IndexDef> generate_candidates(const SelectStatement& stmt, const Catalog& catalog,
                                          bool gdict) {
  const Table& t = catalog.table(stmt.table);
  for (const auto& c : stmt.referenced_columns()) (void)t.column_index(c);
  for (const auto& p : stmt.predicates) p.validate(t.columns[t.column_index(p.column)].type);

  std::vector<Method> methods{Method::kNone, Method::kNs, Method::kPage};
  if (gdict) methods.push_back(Method::kGdict);

  std::vector<IndexDef> out;
  std::set<std::string> seen;
  auto push_shape = [&](IndexDef shape) {
    for (Method m : methods) {
      IndexDef def = shape;
      def.method = m;
      if (seen.insert(def.signature()).second) out.push_back(std::move(def));
    }
  };

  const std::vector<std::string> referenced = stmt.referenced_columns();

  std::vector<std::string> pred_cols;
  for (const auto& p : stmt.predicates)
    if (std::find(pred_cols.begin(), pred_cols.end(), p.column) == pred_cols.end())
      pred_cols.push_back(p.column);

  auto remaining_table_columns = [&](const std::vector<std::string>& keys) {
    std::vector<std::string> rest;
    for (const auto& col : t.columns)
      if (std::find(keys.begin(), keys.end(), col.name) == keys.end()) rest.push_back(col.name);
    return rest;
  };

  if (pred_cols.empty()) {
    // Whole-table reads: only clustered organizations can help.
    if (referenced.empty()) return out;
    IndexDef clustered;
    clustered.table = stmt.table;
    clustered.key_columns = {referenced.front()};
    clustered.included_columns = remaining_table_columns(clustered.key_columns);
    clustered.clustered = true;
    push_shape(clustered);
    return out;
  }

  for (const auto& lead : pred_cols) {
    std::vector<std::string> keys{lead};
    for (const auto& c : pred_cols)
      if (c != lead) keys.push_back(c);

    // Seek shape: predicate columns only.
    IndexDef seek;
    seek.table = stmt.table;
    seek.key_columns = keys;
    push_shape(seek);

    // Covering variant: every remaining referenced column included.
    IndexDef cover = seek;
    for (const auto& c : referenced)
      if (std::find(keys.begin(), keys.end(), c) == keys.end())
        cover.included_columns.push_back(c);
    push_shape(cover);

    // Partial variant: filtered by the predicate on the leading key.
    for (const auto& p : stmt.predicates) {
      if (p.column != lead) continue;
      IndexDef partial = seek;
      partial.filter = p;
      push_shape(partial);
      break;
    }

    // Clustered variant of the covering index (all table columns ride along).
    IndexDef clustered = seek;
    clustered.included_columns = remaining_table_columns(keys);
    clustered.clustered = true;
    push_shape(clustered);
  }
  return out;
}

std::vector<CandidateConfig> select_candidates(std::vector<CandidateConfig> configs,
                                               SelectionMode mode, int k) {
  auto first_sig = [](const CandidateConfig& c) {
    return c.config.indexes.empty() ? std::string() : c.config.indexes.front().def.signature();
  };

  if (mode == SelectionMode::kTopK) {
    if (k < 1) fail("top-k selection needs k >= 1");
    std::sort(configs.begin(), configs.end(), [&](const auto& a, const auto& b) {
      if (a.cost != b.cost) return a.cost < b.cost;
      if (a.size != b.size) return a.size < b.size;
      return first_sig(a) < first_sig(b);
    });
    if (configs.size() > static_cast<size_t>(k)) configs.resize(k);
    return configs;
  }

  // Skyline: pairwise dominance cull, O(n^2) as advertised.
  std::vector<CandidateConfig> out;
  for (size_t i = 0; i < configs.size(); ++i) {
    bool dominated = false;
    for (size_t j = 0; j < configs.size() && !dominated; ++j) {
      if (i == j) continue;
      const bool le = configs[j].cost <= configs[i].cost && configs[j].size <= configs[i].size;
      const bool strict = configs[j].cost < configs[i].cost || configs[j].size < configs[i].size;
      dominated = le && strict;
    }
    if (!dominated) out.push_back(configs[i]);
  }
  return out;
}

namespace {

struct Eval {
  const ConfiguredIndex* cand = nullptr;
  double benefit = 0;
  double density = 0;
  bool fits = false;
};

bool eligible(const Configuration& config, const ConfiguredIndex& cand) {
  const std::string sig = cand.def.signature();
  if (config.contains(sig)) return false;
  if (cand.def.clustered && config.has_clustered(cand.def.table)) return false;
  return true;
}

std::vector<Eval> evaluate_candidates(const Configuration& config, double current_cost,
                                      const std::vector<ConfiguredIndex>& pool,
                                      const CostOracle& cost, double budget) {
  std::vector<Eval> evals;
  const double used = config.total_pages();
  for (const auto& cand : pool) {
    if (!eligible(config, cand)) continue;
    Configuration next = config;
    next.add(cand);
    Eval e;
    e.cand = &cand;
    e.benefit = current_cost - cost(next);
    e.density = e.benefit / std::max(cand.size.pages, 1e-9);
    e.fits = used + cand.size.pages <= budget + kBudgetEps;
    evals.push_back(e);
  }
  return evals;
}

bool better_pick(const Eval& a, const Eval& b, bool by_density) {
  const double ka = by_density ? a.density : a.benefit;
  const double kb = by_density ? b.density : b.benefit;
  if (ka != kb) return ka > kb;
  if (a.cand->size.pages != b.cand->size.pages) return a.cand->size.pages < b.cand->size.pages;
  return a.cand->def.signature() < b.cand->def.signature();
}

void record_step(std::vector<TraceStep>* trace, int step, const std::string& action,
                 const Eval* picked, double cost_after, const std::vector<Eval>& evals,
                 const std::string& note = "") {
  if (trace == nullptr) return;
  TraceStep ts;
  ts.step = step;
  ts.action = action;
  if (picked != nullptr) {
    ts.index = picked->cand->def.signature();
    ts.benefit = picked->benefit;
    ts.density = picked->density;
    ts.size = picked->cand->size.pages;
  }
  ts.cost_after = cost_after;
  ts.note = note;
  for (const auto& e : evals)
    ts.evals.push_back({e.cand->def.signature(), e.benefit, e.density, e.fits});
  trace->push_back(std::move(ts));
}

/// Oversized recovery: swap one or two members for smaller compressed
/// variants of the same shape so the configuration fits again; keep the
/// cheapest fitting result.
bool recover_oversized(const Configuration& oversized, const std::vector<ConfiguredIndex>& pool,
                       const CostOracle& cost, double budget, Configuration* recovered,
                       double* recovered_cost) {
  auto variants_of = [&](const ConfiguredIndex& member) {
    std::vector<const ConfiguredIndex*> vars;
    for (const auto& cand : pool) {
      if (cand.def.method == Method::kNone) continue;
      if (!cand.def.same_shape(member.def)) continue;
      if (cand.def.method == member.def.method) continue;
      if (cand.size.pages >= member.size.pages) continue;
      vars.push_back(&cand);
    }
    return vars;
  };

  bool found = false;
  auto consider = [&](Configuration cfg) {
    if (cfg.total_pages() > budget + kBudgetEps) return;
    const double c = cost(cfg);
    if (!found || c < *recovered_cost) {
      found = true;
      *recovered = std::move(cfg);
      *recovered_cost = c;
    }
  };

  const size_t n = oversized.indexes.size();
  for (size_t i = 0; i < n; ++i) {
    for (const ConfiguredIndex* v : variants_of(oversized.indexes[i])) {
      Configuration cfg = oversized;
      cfg.indexes[i] = *v;
      consider(std::move(cfg));
    }
  }
  if (found) return true;

  // No single swap fits; try pairs (capped there).
  for (size_t i = 0; i < n; ++i) {
    const auto vi = variants_of(oversized.indexes[i]);
    for (size_t j = i + 1; j < n; ++j) {
      const auto vj = variants_of(oversized.indexes[j]);
      for (const ConfiguredIndex* a : vi) {
        for (const ConfiguredIndex* b : vj) {
          Configuration cfg = oversized;
          cfg.indexes[i] = *a;
          cfg.indexes[j] = *b;
          consider(std::move(cfg));
        }
      }
    }
  }
  return found;
}

}  // namespace

Configuration enumerate(const std::vector<ConfiguredIndex>& pool, const CostOracle& cost,
                        double budget_pages, EnumerationMode mode,
                        std::vector<TraceStep>* trace) {
  if (budget_pages < 0) fail("budget must be >= 0");

  std::vector<ConfiguredIndex> ordered = pool;
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    return a.def.signature() < b.def.signature();
  });

  Configuration config;
  double current = cost(config);
  int step = 0;

  while (true) {
    ++step;
    const auto evals = evaluate_candidates(config, current, ordered, cost, budget_pages);

    const Eval* best_fitting = nullptr;
    const Eval* best_overall = nullptr;
    for (const auto& e : evals) {
      if (e.benefit > 0 &&
          (best_overall == nullptr || better_pick(e, *best_overall, false)))
        best_overall = &e;
      if (e.fits && e.benefit > 0) {
        const bool by_density = mode == EnumerationMode::kDensity;
        if (best_fitting == nullptr || better_pick(e, *best_fitting, by_density))
          best_fitting = &e;
      }
    }

    if (mode != EnumerationMode::kBacktrack) {
      if (best_fitting == nullptr) {
        record_step(trace, step, "stop", nullptr, current, evals);
        break;
      }
      config.add(*best_fitting->cand);
      current = cost(config);
      record_step(trace, step, "add", best_fitting, current, evals);
      continue;
    }

    // Backtracking: walk like pure greedy until the greedy choice is
    // oversized, then try to recover the oversized configuration and keep
    // the better of recovery vs the ordinary fitting step.
    if (best_overall == nullptr) {
      record_step(trace, step, "stop", nullptr, current, evals);
      break;
    }
    if (best_overall->fits) {
      config.add(*best_overall->cand);
      current = cost(config);
      record_step(trace, step, "add", best_overall, current, evals);
      continue;
    }

    Configuration oversized = config;
    oversized.add(*best_overall->cand);
    Configuration recovered;
    double recovered_cost = 0;
    const bool has_recovery =
        recover_oversized(oversized, ordered, cost, budget_pages, &recovered, &recovered_cost);

    const double ordinary_cost =
        best_fitting != nullptr ? current - best_fitting->benefit : current;

    if (has_recovery && recovered_cost < current && recovered_cost < ordinary_cost) {
      config = std::move(recovered);
      current = recovered_cost;
      record_step(trace, step, "backtrack", best_overall, current, evals,
                  "recovered oversized " + best_overall->cand->def.signature());
      continue;
    }
    if (best_fitting != nullptr) {
      config.add(*best_fitting->cand);
      current = cost(config);
      record_step(trace, step, "add", best_fitting, current, evals);
      continue;
    }
    record_step(trace, step, "stop", nullptr, current, evals);
    break;
  }
  return config;
}

namespace {

struct PreparedCandidates {
  std::map<std::string, ConfiguredIndex> pool;              // signature -> candidate
  std::vector<std::pair<size_t, std::vector<std::string>>> per_stmt;  // stmt idx -> sigs
  EstimationPlan plan;
  bool planned = false;
};

/// Candidate generation plus batch size estimation for every compressed
/// candidate through the deduction planner.
PreparedCandidates prepare_candidates(const Workload& workload, Catalog& catalog,
                                      const AdvisorOptions& options, const ErrorModel& model) {
  PreparedCandidates prep;

  std::map<std::string, IndexDef> defs;
  for (size_t si = 0; si < workload.size(); ++si) {
    const auto* sel = std::get_if<SelectStatement>(&workload[si]);
    if (sel == nullptr) continue;  // updates cost but contribute no candidates
    std::vector<std::string> sigs;
    for (auto& def : generate_candidates(*sel, catalog, options.gdict_candidates)) {
      const std::string sig = def.signature();
      defs.emplace(sig, def);
      sigs.push_back(sig);
    }
    prep.per_stmt.emplace_back(si, std::move(sigs));
  }

  // Statistics with the group distincts the ORD-DEP deduction needs: every
  // key prefix of every candidate.
  std::map<std::string, std::vector<std::vector<std::string>>> groups;
  for (const auto& [sig, def] : defs) {
    const auto cols = def.all_columns();
    for (size_t len = 2; len <= cols.size(); ++len)
      groups[def.table].emplace_back(cols.begin(), cols.begin() + len);
  }
  for (const auto& [name, table] : catalog.tables)
    catalog.stats[name] = compute_stats(table, groups[name]);

  std::vector<IndexDef> targets;
  for (const auto& [sig, def] : defs) {
    if (def.method == Method::kNone) continue;
    if (options.size_overrides.count(sig)) continue;
    targets.push_back(def);
  }

  std::map<std::string, SizeEstimate> estimates;
  if (!targets.empty()) {
    prep.plan = options.exact_plan
                    ? plan_exact(targets, {}, options.accuracy, options.f_grid, catalog, model)
                    : plan_greedy(targets, {}, options.accuracy, options.f_grid, catalog, model);
    if (!prep.plan.feasible)
      throw InfeasibleError("size estimation cannot meet the accuracy requirement (" +
                            prep.plan.infeasible_reason +
                            "); relax e, lower q, or extend the sampling grid");
    prep.planned = true;
    SampleManager samples(catalog, options.seed);
    estimates = execute_plan(prep.plan, catalog, samples, model);
  }

  for (const auto& [sig, def] : defs) {
    ConfiguredIndex ci;
    ci.def = def;
    const Table& t = catalog.table(def.table);
    const TableStats& stats = catalog.table_stats(def.table);
    const auto ov = options.size_overrides.find(sig);
    if (ov != options.size_overrides.end()) {
      ci.size = SizeEstimate::exact(ov->second);
    } else if (def.method == Method::kNone) {
      ci.size = SizeEstimate::exact(
          static_cast<double>(estimate_uncompressed_pages(t, stats, def, t.rows)));
    } else {
      ci.size = estimates.at(sig);
    }
    prep.pool.emplace(sig, std::move(ci));
  }
  return prep;
}

std::vector<ConfiguredIndex> selection_union(const PreparedCandidates& prep,
                                             const Workload& workload, const Catalog& catalog,
                                             const AdvisorOptions& options,
                                             const CostModelParams& params,
                                             bool uncompressed_only) {
  std::set<std::string> chosen;
  for (const auto& [si, sigs] : prep.per_stmt) {
    const auto& sel = std::get<SelectStatement>(workload[si]);
    std::vector<CandidateConfig> configs;
    for (const auto& sig : sigs) {
      const ConfiguredIndex& ci = prep.pool.at(sig);
      if (uncompressed_only && ci.def.method != Method::kNone) continue;
      CandidateConfig cc;
      cc.config.add(ci);
      cc.cost = best_plan(Statement{sel}, cc.config, catalog, params).total;
      cc.size = ci.size.pages;
      configs.push_back(std::move(cc));
    }
    for (const auto& cc : select_candidates(std::move(configs), options.selection, options.topk))
      for (const auto& member : cc.config.indexes) chosen.insert(member.def.signature());
  }
  std::vector<ConfiguredIndex> pool;
  for (const auto& sig : chosen) pool.push_back(prep.pool.at(sig));
  return pool;
}

/// Decoupled baseline: pick indexes as if compression did not exist, then
/// compress the picks greedily, then fill freed space with more uncompressed
/// picks. Earlier selections are never revisited.
Configuration run_staged(const PreparedCandidates& prep, const Workload& workload,
                         const Catalog& catalog, const AdvisorOptions& options,
                         const CostModelParams& params, const CostOracle& oracle,
                         std::vector<TraceStep>* trace) {
  const auto pool_u = selection_union(prep, workload, catalog, options, params, true);
  Configuration config = enumerate(pool_u, oracle, options.budget_pages, options.enumeration, trace);
  double current = oracle(config);
  int step = trace != nullptr && !trace->empty() ? trace->back().step : 0;

  bool changed = true;
  while (changed) {
    changed = false;

    // Compress members while it pays off.
    while (true) {
      int best_member = -1;
      const ConfiguredIndex* best_variant = nullptr;
      double best_cost = current;
      for (size_t i = 0; i < config.indexes.size(); ++i) {
        for (const auto& [sig, cand] : prep.pool) {
          if (cand.def.method == Method::kNone) continue;
          if (!cand.def.same_shape(config.indexes[i].def)) continue;
          if (cand.def.method == config.indexes[i].def.method) continue;
          Configuration next = config;
          next.indexes[i] = cand;
          if (next.total_pages() > options.budget_pages + kBudgetEps) continue;
          const double c = oracle(next);
          if (c < best_cost) {
            best_cost = c;
            best_member = static_cast<int>(i);
            best_variant = &cand;
          }
        }
      }
      if (best_member < 0) break;
      config.indexes[best_member] = *best_variant;
      current = best_cost;
      changed = true;
      if (trace != nullptr) {
        TraceStep ts;
        ts.step = ++step;
        ts.action = "staged-compress";
        ts.index = best_variant->def.signature();
        ts.cost_after = current;
        trace->push_back(std::move(ts));
      }
    }

    // Spend freed space on further uncompressed picks.
    while (true) {
      const auto evals =
          evaluate_candidates(config, current, pool_u, oracle, options.budget_pages);
      const Eval* best = nullptr;
      for (const auto& e : evals)
        if (e.fits && e.benefit > 0 && (best == nullptr || better_pick(e, *best, false)))
          best = &e;
      if (best == nullptr) break;
      config.add(*best->cand);
      current = oracle(config);
      changed = true;
      if (trace != nullptr) {
        TraceStep ts;
        ts.step = ++step;
        ts.action = "staged-extend";
        ts.index = best->cand->def.signature();
        ts.benefit = best->benefit;
        ts.size = best->cand->size.pages;
        ts.cost_after = current;
        trace->push_back(std::move(ts));
      }
    }
  }
  return config;
}

}  // namespace

Recommendation tune(const Workload& workload, Catalog& catalog, const AdvisorOptions& options,
                    const CostModelParams& params, const ErrorModel& model) {
  if (workload.empty()) fail("tune: workload is empty");
  if (options.budget_pages < 0) fail("tune: budget must be >= 0");
  options.accuracy.validate();
  params.validate();

  const PreparedCandidates prep = prepare_candidates(workload, catalog, options, model);

  const CostOracle oracle = [&](const Configuration& cfg) {
    return workload_cost(workload, cfg, catalog, params);
  };

  Recommendation rec;
  rec.budget_pages = options.budget_pages;
  rec.cost_before = oracle(Configuration{});
  if (prep.planned) {
    rec.estimation_f = prep.plan.f;
    rec.estimation_cost = prep.plan.total_cost;
  }

  if (options.staged) {
    rec.config = run_staged(prep, workload, catalog, options, params, oracle, &rec.trace);
  } else {
    const auto pool = selection_union(prep, workload, catalog, options, params, false);
    rec.config = enumerate(pool, oracle, options.budget_pages, options.enumeration, &rec.trace);
  }

  rec.cost_after = oracle(rec.config);
  rec.improvement = rec.cost_before > 0 ? 1.0 - rec.cost_after / rec.cost_before : 0.0;
  return rec;
}

}  // namespace compass
