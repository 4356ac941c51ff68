#pragma once

#include <map>
#include <string>
#include <vector>

#include "compass/catalog.hpp"
#include "compass/sample_manager.hpp"
#include "compass/size_estimate.hpp"

namespace compass {

/// Raised when no sampling fraction can satisfy the accuracy constraint.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// An index already materialized in the database: its size is known exactly
/// and costs nothing to "estimate".
struct ExistingIndex {
  IndexDef def;
  double pages = 0;
};

enum class DeductionKind { kColSet, kColExtOrdInd, kColExtOrdDep };

std::string deduction_kind_name(DeductionKind k);

struct PlanNode {
  enum class State { kSampled, kDeduced };

  IndexDef def;
  State state = State::kSampled;
  bool existing = false;
  bool is_target = false;
  double exact_pages = 0;  // existing indexes only
  double cost = 0;         // uncompressed pages of the index built on the f-sample
  ErrorDist err;
  double prob = 1.0;       // prob_within(e, err)
  DeductionKind ded_kind = DeductionKind::kColSet;
  std::vector<std::string> ded_children;  // signatures, narrow nodes first
};

/// Assignment of SAMPLED/DEDUCED per index plus the chosen sampling fraction.
/// Nodes are listed narrow to wide, which is also a valid execution order.
struct EstimationPlan {
  bool feasible = false;
  std::string infeasible_reason;
  double f = 0;
  double total_cost = 0;
  AccuracyRequirement req;
  std::vector<PlanNode> nodes;

  const PlanNode* find(const std::string& signature) const;
};

std::vector<double> default_f_grid();

/// Greedy graph search: processes targets narrow to wide, deducing from
/// resolved narrower nodes when a deduction meets the accuracy constraint,
/// sampling children to enable a deduction when that undercuts sampling the
/// node, and sampling otherwise. Sweeps each fraction in f_grid and returns
/// the feasible plan with the least total cost. Reports infeasibility when
/// no fraction satisfies the constraint even with every target sampled.
EstimationPlan plan_greedy(const std::vector<IndexDef>& targets,
                           const std::vector<ExistingIndex>& existing,
                           const AccuracyRequirement& req,
                           const std::vector<double>& f_grid,
                           const Catalog& catalog, const ErrorModel& model);

/// Exhaustive branch over SAMPLED vs each eligible deduction, solved per
/// connected subgraph. Refuses subgraphs above the node guard.
inline constexpr size_t kExactPlannerClusterGuard = 12;

EstimationPlan plan_exact(const std::vector<IndexDef>& targets,
                          const std::vector<ExistingIndex>& existing,
                          const AccuracyRequirement& req,
                          const std::vector<double>& f_grid,
                          const Catalog& catalog, const ErrorModel& model);

/// Cost of the trivial plan that samples every target at fraction f.
double all_sampled_cost(const std::vector<IndexDef>& targets, double f, const Catalog& catalog);

/// Runs the plan: SampleCF for sampled nodes through the manager's amortized
/// samples, then deductions in dependency order. Returns an estimate per
/// node signature (targets included).
std::map<std::string, SizeEstimate> execute_plan(const EstimationPlan& plan,
                                                 const Catalog& catalog,
                                                 SampleManager& samples,
                                                 const ErrorModel& model);

}  // namespace compass
