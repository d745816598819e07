#pragma once

#include <complex>
#include <cstdint>

namespace divcorr {

// A truncated series value. tail_bound covers the omitted terms and the
// floating-point error of the retained ones, so |value - true| <= tail_bound
// under the assumptions documented by the producing function.
struct TruncatedValue {
  std::complex<double> value{};
  double tail_bound = 0.0;
  std::uint64_t cutoff = 0;
  std::uint64_t terms_used = 0;
};

}  // namespace divcorr

namespace divcorr {

// An identity checked numerically: |lhs - rhs| against the certified bound
// on the truncation and rounding error of the side that was truncated.
struct IdentityResidual {
  double residual = 0.0;
  double bound = 0.0;
  bool holds() const noexcept { return residual <= bound; }
};

}  // namespace divcorr
