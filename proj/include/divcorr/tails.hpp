#pragma once

// Explicit majorants for the omitted part of a divisor-weighted series.

#include <cstdint>
#include <vector>

namespace divcorr {

// Bound for sum_{n > T} d_r(n) / n^sigma via Rankin's trick:
//   min over 1 < theta <= sigma of T^{theta - sigma} zeta(theta)^r.
// Returns +inf when sigma <= 1 + kZetaDelta.
double rankin_tail(double T, double sigma, int r);

// The same bound with the theta grid and zeta values precomputed, for
// repeated evaluation at many T.
class RankinBound {
 public:
  RankinBound(double sigma, int r);
  double operator()(double T) const;

 private:
  double sigma_;
  std::vector<double> theta_, log_zeta_r_;
};

// log C_delta, where d(n) <= C_delta n^delta for all n and
// C_delta = prod_{p < 2^{1/delta}} max_{a >= 0} (a + 1) p^{-a delta}.
double log_divisor_bound_constant(double delta);

// sum_{M >= M0} M^{-e} <= M0^{-e} + M0^{1-e} / (e - 1), for e > 1 and M0 >= 1.
double power_tail(double M0, double e);

// Allowance for the rounding error of a pairwise sum of n terms with
// absolute sum abs_sum.
double rounding_allowance(double n, double abs_sum);

}  // namespace divcorr
