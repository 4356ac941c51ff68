#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "compass/table.hpp"

namespace compass {

struct SyntheticColumnSpec {
  std::string name;
  ColumnType type;
  uint64_t domain = 1;        // distinct domain size, >= 1
  double zipf = 0.0;          // Zipf exponent z >= 0; 0 means uniform
  double null_fraction = 0.0; // fraction of rows set to NULL
  uint32_t prefix_len = 0;    // CHAR only: leading bytes shared by all values
};

struct SyntheticSpec {
  std::string name = "synthetic";
  uint64_t rows = 0;
  uint64_t seed = 0;
  std::vector<SyntheticColumnSpec> columns;
};

/// Deterministic generator: a pure function of the spec (seed included).
/// Values follow a Zipf(z) frequency over the declared domain, drawn by
/// inverse CDF over precomputed cumulative weights from a splitmix64 stream.
/// The declared null fraction is realized exactly (up to rounding) by seeded
/// selection of null positions.
Table generate_synthetic(const SyntheticSpec& spec);

}  // namespace compass
