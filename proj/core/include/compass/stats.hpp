#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "compass/predicate.hpp"
#include "compass/table.hpp"

namespace compass {

/// Exact per-column statistics gathered by a full scan.
struct ColumnStats {
  uint64_t distinct_count = 0;   // exact, >= 1 for non-empty columns
  double null_fraction = 0.0;    // fraction of all-NUL cells
  double avg_prefix_share = 0.0; // mean shared-prefix fraction of sorted neighbors
  uint64_t total_tuples = 0;

  // Bounds over non-NULL cells, kept for uniform-range selectivity.
  std::string min_enc, max_enc;
  bool has_bounds = false;
};

struct TableStats {
  uint64_t rows = 0;
  std::map<std::string, ColumnStats> columns;

  /// Exact combined distinct counts for requested column groups. Keys are
  /// sorted column-name lists (distinct counts are order-insensitive).
  std::map<std::vector<std::string>, uint64_t> group_distincts;

  const ColumnStats& column(const std::string& name) const;

  /// Distinct count of a column group. Singleton groups fall back to the
  /// per-column stat; missing multi-column groups fail.
  uint64_t group_distinct(std::vector<std::string> cols) const;
  bool has_group(std::vector<std::string> cols) const;
};

/// Full-scan statistics: exact distinct counts per column and for every
/// requested group, null fractions, sorted-neighbor prefix shares and value
/// bounds. Idempotent and insensitive to row permutation.
TableStats compute_stats(const Table& t,
                         const std::vector<std::vector<std::string>>& groups = {});

/// Fraction of rows expected to satisfy the predicate, assuming uniformity
/// within the observed [min, max] range; equality predicates use
/// 1/distinct_count.
double estimate_selectivity(const ColumnStats& stats, const ColumnType& type,
                            const Predicate& pred);

/// Product over a conjunction of predicates (independence assumption).
double estimate_selectivity(const TableStats& stats, const Table& schema,
                            const std::vector<Predicate>& preds);

}  // namespace compass
