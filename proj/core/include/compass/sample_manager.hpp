#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>

#include "compass/catalog.hpp"
#include "compass/sample.hpp"

namespace compass {

/// One amortized sample per (table, fraction), built on first use and reused
/// for every index on that table. Filtered variants are derived from the
/// base sample. Single-writer construction per key, concurrent reads after.
class SampleManager {
 public:
  SampleManager(const Catalog& catalog, uint64_t seed) : catalog_(catalog), seed_(seed) {}

  const Sample& base(const std::string& table, double f);
  const Sample& filtered(const std::string& table, double f, const Predicate& pred);

  uint64_t seed() const { return seed_; }

 private:
  using BaseKey = std::pair<std::string, int64_t>;                    // table, f scaled
  using FilterKey = std::tuple<std::string, int64_t, std::string>;   // + predicate signature

  static int64_t f_key(double f);

  const Catalog& catalog_;
  uint64_t seed_;
  std::mutex mu_;
  std::map<BaseKey, std::unique_ptr<Sample>> base_;
  std::map<FilterKey, std::unique_ptr<Sample>> filtered_;
};

}  // namespace compass
