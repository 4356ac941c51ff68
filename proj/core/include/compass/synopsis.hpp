#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "compass/catalog.hpp"
#include "compass/sample.hpp"

namespace compass {

struct DimJoin {
  std::string foreign_key;  // column of the fact table
  std::string dim_table;
  std::string dim_key;      // unique key column of the dimension
};

/// Sample of a fact table pre-joined with full dimension tables, so every
/// foreign key finds its match and the joined row count equals the fact
/// sample's row count exactly.
struct JoinSynopsis {
  std::string fact_table;
  double fraction = 1.0;
  uint64_t seed = 0;
  std::vector<DimJoin> dims;
  Table rows;               // fact columns, then dimension columns (keys dropped)
  uint64_t fact_rows = 0;   // row count of the full fact table

  /// Row ids sorted by value, built eagerly for key/foreign-key columns to
  /// speed up filter and group evaluation on the synopsis.
  std::map<std::string, std::vector<uint64_t>> sorted_cols;
};

JoinSynopsis build_join_synopsis(const Catalog& catalog, const std::string& fact,
                                 const std::vector<DimJoin>& dims, double f, uint64_t seed);

/// Grouped materialized-view shape: optional row filter, then GROUP BY.
struct MvDef {
  std::vector<std::string> group_by;
  std::optional<Predicate> filter;
};

/// f_k = number of distinct groups appearing exactly k times in the sample;
/// d groups, r sample tuples before aggregation, n estimated source tuples
/// after filtering.
struct FrequencyStats {
  std::map<uint64_t, uint64_t> freq;
  uint64_t d = 0;
  uint64_t r = 0;
  double n = 0;

  void validate() const;  // sum k*f_k == r, sum f_k == d, d <= r
};

/// Estimator interface: (f, d, r, n) -> estimated distinct count.
using DistinctEstimator = std::function<double(const FrequencyStats&)>;

/// GEE: sqrt(n/r) * f1 + sum_{k>=2} f_k, clamped into [d, n].
/// r = n returns exactly d. Fails when r > n.
double estimate_distinct(const FrequencyStats& stats);

/// Naive scale-up d / f, for comparison.
double estimate_distinct_multiply(const FrequencyStats& stats, double fraction);

struct MvSampleResult {
  Sample sample;             // group-by columns plus a "cnt" INT64 column
  FrequencyStats stats;
  double estimated_tuples = 0;
  bool low_confidence = false;
};

/// Groups the (filtered) source sample with COUNT per group, derives the
/// frequency statistics and estimates the grouped view's true tuple count.
/// `root_tuples` is the full row count of the root (fact) table. An empty
/// filtered source yields estimate 0 with the low-confidence flag set.
/// Sorted column lookups, when provided, speed up the filter step.
MvSampleResult create_mv_sample(const Table& source_rows, double fraction,
                                uint64_t root_tuples, const MvDef& mv,
                                const DistinctEstimator& estimator = {},
                                const std::map<std::string, std::vector<uint64_t>>* sorted_cols =
                                    nullptr);

MvSampleResult create_mv_sample(const JoinSynopsis& synopsis, const MvDef& mv,
                                const DistinctEstimator& estimator = {});
MvSampleResult create_mv_sample(const Sample& sample, uint64_t root_tuples, const MvDef& mv,
                                const DistinctEstimator& estimator = {});

}  // namespace compass
