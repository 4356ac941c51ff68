#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "compass/catalog.hpp"
#include "compass/size_estimate.hpp"

namespace compass {

struct SelectStatement {
  std::string table;
  std::vector<Predicate> predicates;
  std::vector<std::string> columns;  // projected / aggregated
  std::optional<std::string> aggregate;
  double weight = 1.0;

  /// Columns the statement reads: projected, predicated or aggregated,
  /// each counted once.
  std::vector<std::string> referenced_columns() const;
};

struct InsertStatement {
  std::string table;
  uint64_t rows_per_exec = 1;
  double weight = 1.0;
};

using Statement = std::variant<SelectStatement, InsertStatement>;
using Workload = std::vector<Statement>;

double statement_weight(const Statement& s);
const std::string& statement_table(const Statement& s);

/// Cost constants. Compression adds per-tuple CPU: alpha to write, beta per
/// column to read, both higher for PAGE than for row methods (NS, GDICT).
struct CostModelParams {
  double io_page_cost = 1.0;
  double cpu_tuple_cost = 0.001;
  double lookup_cost = 0.02;        // per non-covering match
  double alpha_row = 0.002;         // NS / GDICT write surcharge per tuple
  double alpha_page = 0.01;         // PAGE write surcharge per tuple
  double beta_row = 0.0002;         // NS / GDICT read surcharge per tuple-column
  double beta_page = 0.001;         // PAGE read surcharge per tuple-column
  double maintenance_per_index_tuple = 0.002;

  double alpha(Method m) const;
  double beta(Method m) const;
  void validate() const;
};

struct ConfiguredIndex {
  IndexDef def;
  SizeEstimate size;
};

/// A candidate index set evaluated jointly. At most one clustered index per
/// table.
struct Configuration {
  std::vector<ConfiguredIndex> indexes;

  double total_pages() const;
  bool contains(const std::string& signature) const;
  bool has_clustered(const std::string& table, const std::string& except_sig = "") const;
  void add(ConfiguredIndex idx);  // validates uniqueness rules
  void validate() const;
};

enum class PathKind { kHeapScan, kIndexScan, kIndexSeek };

std::string path_kind_name(PathKind k);

struct AccessPath {
  PathKind kind = PathKind::kHeapScan;
  int index_pos = -1;   // position in the configuration, -1 for heap
  bool covering = true;
  double delivered_tuples = 0;
  double io = 0;
  double cpu = 0;

  double total() const { return io + cpu; }
};

struct CostedPlan {
  AccessPath chosen;
  std::vector<AccessPath> considered;
  double io_cost = 0;
  double cpu_cost = 0;
  double total = 0;
};

/// Cost of answering the SELECT through one access path.
///   io  = pages touched * io_page_cost (selectivity-scaled for seeks)
///   cpu = tuples * cpu_tuple_cost + lookups + beta * tuples * columns_read
/// Decompression CPU is charged regardless of buffering.
double read_cost(const SelectStatement& stmt, const Configuration& config,
                 const AccessPath& path, const Catalog& catalog,
                 const CostModelParams& params);

/// Maintenance cost of one INSERT against one index:
/// maintenance * tuples + alpha(method) * tuples, scaled by the index
/// filter's selectivity for partial indexes.
double update_cost(const InsertStatement& stmt, const IndexDef& index,
                   const Catalog& catalog, const CostModelParams& params);

/// Best applicable access path for the statement under the hypothetical
/// configuration (what-if costing). Heap scan is always applicable.
CostedPlan best_plan(const Statement& stmt, const Configuration& config,
                     const Catalog& catalog, const CostModelParams& params);

/// Sum of weighted best-plan costs.
double workload_cost(const Workload& workload, const Configuration& config,
                     const Catalog& catalog, const CostModelParams& params);

/// Pages of the uncompressed base heap (all table columns).
uint64_t heap_pages(const Table& t);

}  // namespace compass
