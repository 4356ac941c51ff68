#pragma once

#include <cstdint>
#include <span>

#include "compass/page.hpp"

namespace compass {

/// Error of a size estimate as a random variable X = estimate / truth:
/// mean E(X) and variance V(X).
struct ErrorDist {
  double mean = 1.0;
  double var = 0.0;
};

/// Every estimate must land within the multiplicative tolerance e with
/// probability at least q.
struct AccuracyRequirement {
  double e = 0.5;   // tolerable error ratio, > 0
  double q = 0.9;   // confidence, in (0, 1)

  void validate() const;
};

/// Empirical error coefficients for the estimation methods.
///
/// SampleCF bias/stddev decay with the sampling fraction as c * -ln(f), so
/// they vanish at f = 1. Deduction errors grow linearly with the number of
/// extrapolation inputs a. Defaults are least-squares fits that proved
/// stable across schemas and skews; the calibrate command can refit them.
struct ErrorModel {
  // SampleCF curves, multiplied by -ln(f).
  double samplecf_ns_stddev_lnf = 0.0062;  // ORD-IND; bias ~ 0
  double samplecf_ld_bias_lnf = 0.015;     // ORD-DEP
  double samplecf_ld_stddev_lnf = 0.018;

  // Deductions.
  double colset_stddev = 0.0003;           // bias 0
  double colext_ns_bias_a = 0.01;          // ORD-IND, per input
  double colext_ns_stddev_a = 0.002;
  double colext_ld_bias_a = -0.03;         // ORD-DEP, per input
  double colext_ld_stddev_a = 0.01;

  /// Variance assigned to estimates from empty/unusable samples.
  double var_ceiling = 4.0;

  /// SampleCF error at fraction f. For ORD-IND the variance is capped by the
  /// analytical bound 1/(r f^2), r being the sampled tuple count.
  ErrorDist sample_cf_error(Category cat, double f, uint64_t sampled_rows) const;

  ErrorDist colset_error() const;
  ErrorDist colext_error(Category cat, int arity) const;
};

/// Product of independent ratio variables (Goodman):
///   E = prod E_i,   V = prod(V_i + E_i^2) - prod(E_i^2).
/// Independence is a heuristic when inputs share a sample.
ErrorDist compose_error(std::span<const ErrorDist> factors);

/// Probability that the estimate lands within tolerance e of the truth:
/// the normal integral over [1/(1+e), 1+e] with the distribution's mean and
/// variance. V = 0 degenerates to an indicator on the mean.
double prob_within(double e, const ErrorDist& dist);

/// Standard normal CDF.
double normal_cdf(double x);

}  // namespace compass
