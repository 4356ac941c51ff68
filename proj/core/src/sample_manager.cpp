#include "compass/sample_manager.hpp"

#include <cmath>

namespace compass {

int64_t SampleManager::f_key(double f) { return static_cast<int64_t>(std::llround(f * 1e9)); }

const Sample& SampleManager::base(const std::string& table, double f) {
  std::lock_guard<std::mutex> lock(mu_);
  const BaseKey key{table, f_key(f)};
  auto it = base_.find(key);
  if (it == base_.end()) {
    auto sample = std::make_unique<Sample>(build_base_sample(catalog_.table(table), f, seed_));
    it = base_.emplace(key, std::move(sample)).first;
  }
  return *it->second;
}

const Sample& SampleManager::filtered(const std::string& table, double f, const Predicate& pred) {
  const Sample& base_sample = base(table, f);
  std::lock_guard<std::mutex> lock(mu_);
  const FilterKey key{table, f_key(f), pred.signature()};
  auto it = filtered_.find(key);
  if (it == filtered_.end()) {
    auto sample = std::make_unique<Sample>(build_filtered_sample(base_sample, pred));
    it = filtered_.emplace(key, std::move(sample)).first;
  }
  return *it->second;
}

}  // namespace compass
