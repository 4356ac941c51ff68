#include "compass/sample.hpp"

namespace compass {

Sample build_base_sample(const Table& t, double f, uint64_t seed) {
  if (!(f > 0.0 && f <= 1.0)) fail("sampling fraction must be in (0, 1]");
  Sample s;
  s.source = t.name;
  s.fraction = f;
  s.seed = seed;
  if (f == 1.0) {
    s.rows = t;
    return s;
  }
  Rng rng(mix64(seed ^ mix64(std::hash<std::string>{}(t.name))));
  std::vector<uint64_t> keep;
  for (uint64_t r = 0; r < t.rows; ++r)
    if (rng.next_unit() < f) keep.push_back(r);
  s.rows = select_rows(t, keep);
  return s;
}

Sample build_filtered_sample(const Sample& base, const Predicate& filter) {
  Sample s;
  s.source = base.source;
  s.fraction = base.fraction;
  s.seed = base.seed;
  s.rows = select_rows(base.rows, filter_rows(base.rows, filter));
  return s;
}

}  // namespace compass
