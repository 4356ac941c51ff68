#include "compass/error_model.hpp"

#include <algorithm>
#include <cmath>

namespace compass {

void AccuracyRequirement::validate() const {
  if (!(e > 0)) fail("tolerable error ratio e must be > 0");
  if (!(q > 0 && q < 1)) fail("confidence q must be in (0, 1)");
}

ErrorDist ErrorModel::sample_cf_error(Category cat, double f, uint64_t sampled_rows) const {
  if (!(f > 0 && f <= 1)) fail("sampling fraction must be in (0, 1]");
  const double neg_ln_f = -std::log(f);
  ErrorDist d;
  if (cat == Category::kOrdInd) {
    d.mean = 1.0;
    d.var = samplecf_ns_stddev_lnf * neg_ln_f * samplecf_ns_stddev_lnf * neg_ln_f;
    if (sampled_rows > 0) {
      const double bound = 1.0 / (static_cast<double>(sampled_rows) * f * f);
      d.var = std::min(d.var, bound);
    }
  } else {
    d.mean = 1.0 + samplecf_ld_bias_lnf * neg_ln_f;
    const double sd = samplecf_ld_stddev_lnf * neg_ln_f;
    d.var = sd * sd;
  }
  return d;
}

ErrorDist ErrorModel::colset_error() const {
  return {1.0, colset_stddev * colset_stddev};
}

ErrorDist ErrorModel::colext_error(Category cat, int arity) const {
  if (arity < 1) fail("extrapolation needs at least one input");
  const double a = static_cast<double>(arity);
  ErrorDist d;
  if (cat == Category::kOrdInd) {
    d.mean = 1.0 + colext_ns_bias_a * a;
    const double sd = colext_ns_stddev_a * a;
    d.var = sd * sd;
  } else {
    d.mean = 1.0 + colext_ld_bias_a * a;
    const double sd = colext_ld_stddev_a * a;
    d.var = sd * sd;
  }
  return d;
}

ErrorDist compose_error(std::span<const ErrorDist> factors) {
  double mean = 1.0;
  double prod_vm = 1.0;  // prod(V_i + E_i^2)
  double prod_m2 = 1.0;  // prod(E_i^2)
  for (const auto& f : factors) {
    if (f.var < 0) fail("error variance must be >= 0");
    mean *= f.mean;
    prod_vm *= f.var + f.mean * f.mean;
    prod_m2 *= f.mean * f.mean;
  }
  return {mean, std::max(0.0, prod_vm - prod_m2)};
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double prob_within(double e, const ErrorDist& dist) {
  if (!(e > 0)) fail("tolerance e must be > 0");
  if (dist.var < 0) fail("variance must be >= 0");
  const double lo = 1.0 / (1.0 + e);
  const double hi = 1.0 + e;
  if (dist.var == 0) return (dist.mean >= lo && dist.mean <= hi) ? 1.0 : 0.0;
  const double sigma = std::sqrt(dist.var);
  return normal_cdf((hi - dist.mean) / sigma) - normal_cdf((lo - dist.mean) / sigma);
}

}  // namespace compass
