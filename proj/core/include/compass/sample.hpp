#pragma once

#include <cstdint>
#include <string>

#include "compass/predicate.hpp"
#include "compass/table.hpp"

namespace compass {

/// Samples smaller than this mark downstream estimates low-confidence.
inline constexpr uint64_t kLowConfidenceRows = 30;

struct Sample {
  std::string source;  // table or synopsis name
  double fraction = 1.0;
  uint64_t seed = 0;
  Table rows;

  bool low_confidence() const { return rows.rows < kLowConfidenceRows; }
};

/// Bernoulli row sample: each row kept independently with probability f,
/// from a seeded stream. f = 1 returns all rows. Deterministic in
/// (table, f, seed).
Sample build_base_sample(const Table& t, double f, uint64_t seed);

/// Rows of the base sample satisfying the predicate; the fraction is
/// unchanged (the selectivity shows up in the row count).
Sample build_filtered_sample(const Sample& base, const Predicate& filter);

}  // namespace compass
