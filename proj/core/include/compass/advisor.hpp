#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "compass/cost_model.hpp"
#include "compass/estimation_plan.hpp"

namespace compass {

/// Candidate index set relevant to one statement, with the statement cost
/// under it and its total estimated pages. These two values drive the
/// dominance tests.
struct CandidateConfig {
  Configuration config;
  double cost = 0;
  double size = 0;
};

enum class SelectionMode { kTopK, kSkyline };
enum class EnumerationMode { kPure, kDensity, kBacktrack };

SelectionMode parse_selection_mode(std::string_view s);
EnumerationMode parse_enumeration_mode(std::string_view s);
std::string enumeration_mode_name(EnumerationMode m);

struct AdvisorOptions {
  double budget_pages = 0;
  SelectionMode selection = SelectionMode::kSkyline;
  int topk = 2;
  EnumerationMode enumeration = EnumerationMode::kBacktrack;
  bool staged = false;  // decoupled baseline: select uncompressed, compress after
  AccuracyRequirement accuracy{0.5, 0.9};
  uint64_t seed = 42;
  std::vector<double> f_grid = default_f_grid();
  bool gdict_candidates = false;
  bool exact_plan = false;

  /// Test plumbing: pins estimated pages per index signature, bypassing
  /// size estimation for those indexes.
  std::map<std::string, double> size_overrides;
};

struct CandidateEval {
  std::string signature;
  double benefit = 0;
  double density = 0;
  bool fits = false;
};

struct TraceStep {
  int step = 0;
  std::string action;  // "add", "backtrack", "stop"
  std::string index;
  double benefit = 0;
  double density = 0;
  double size = 0;
  double cost_after = 0;
  std::string note;
  std::vector<CandidateEval> evals;
};

struct Recommendation {
  Configuration config;
  double budget_pages = 0;
  double cost_before = 0;
  double cost_after = 0;
  double improvement = 0;  // 1 - after/before
  double estimation_f = 0;
  double estimation_cost = 0;
  std::vector<TraceStep> trace;
};

/// Syntactically relevant indexes for the query: seek indexes led by each
/// predicate column, covering variants with the remaining referenced columns
/// included, partial variants filtered by the leading predicate, and a
/// clustered variant; each shape crossed with the compression methods.
std::vector<IndexDef> generate_candidates(const SelectStatement& stmt, const Catalog& catalog,
                                          bool gdict = false);

/// Skyline keeps the (cost, size) Pareto frontier; top-k keeps the k
/// cheapest configurations.
std::vector<CandidateConfig> select_candidates(std::vector<CandidateConfig> configs,
                                               SelectionMode mode, int k = 2);

using CostOracle = std::function<double(const Configuration&)>;

/// Budgeted greedy search over the candidate pool.
///   pure      adds the best cost reduction that fits, until none helps
///   density   ranks by reduction per page instead
///   backtrack runs pure, and when the best choice is oversized tries to
///             recover it by swapping members for their compressed variants
Configuration enumerate(const std::vector<ConfiguredIndex>& pool, const CostOracle& cost,
                        double budget_pages, EnumerationMode mode,
                        std::vector<TraceStep>* trace = nullptr);

/// Full pipeline: candidates per SELECT, batch size estimation through the
/// deduction planner, per-statement costing, candidate selection, budgeted
/// enumeration. With options.staged the decoupled baseline runs instead:
/// selection ignores compression, chosen indexes are compressed afterwards,
/// selection is never revisited.
Recommendation tune(const Workload& workload, Catalog& catalog, const AdvisorOptions& options,
                    const CostModelParams& params, const ErrorModel& model);

}  // namespace compass
