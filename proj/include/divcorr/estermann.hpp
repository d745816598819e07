#pragma once

// The shifted Estermann function D_{alpha,beta}(s, h/l) = sum tau_{alpha,beta}(n) e(nh/l) / n^s
// in its half-plane of absolute convergence, its chi-factors, and identities
// obtained by averaging over h and l with Ramanujan sums.

#include <complex>
#include <cstdint>

#include "divcorr/truncated.hpp"

namespace divcorr {

using Complex = std::complex<double>;

struct EstermannPoint {
  Complex alpha{};
  Complex beta{};
  Complex s{};
  std::int64_t h = 0;
  std::uint64_t l = 1;
};

// Partial sum over n <= T. Needs gcd(h, l) = 1 and
// Re s > 1 - min(Re alpha, Re beta) + delta (ErrorKind::domain otherwise).
TruncatedValue estermann_direct(const EstermannPoint& p, std::uint64_t T);

struct ChiFactor {
  int sign = 1;
  Complex value{};
};

// 2 (2 pi)^{2s-2+alpha+beta} Gamma(1-s-alpha) Gamma(1-s-beta) cos(pi ((s+alpha) -/+ (s+beta)) / 2)
ChiFactor chi_factor(int sign, Complex s, Complex alpha, Complex beta);

// sum_{h mod l, (h,l)=1} D_{0,0}(s, h/l) as sum_{n<=T} d(n) c_l(n) / n^s.
TruncatedValue estermann_reduced_sum(Complex s, std::uint64_t l, std::uint64_t T);

// Default n-truncation used by averaged_identity_residual.
std::uint64_t averaged_identity_cutoff(std::uint64_t L);

// |sum_{l<=L} l^{-w} sum*_h D_{0,0}(s, h/l) - zeta(s)^2 zeta(s+w-1)^2 / (zeta(w) zeta(2s+w-1))|
// with the inner sums truncated at n <= T (0 selects averaged_identity_cutoff(L)).
IdentityResidual averaged_identity_residual(Complex s, Complex w, std::uint64_t L, std::uint64_t T = 0);

// |zeta(s) sum_{l<=L} c_l(m) / l^s - sigma_{1-s}(m)| for m >= 1, Re s > 1.
IdentityResidual ramanujan_formula_residual(Complex s, std::int64_t m, std::uint64_t L);

// The functional equation read literally, with D_{-alpha,-beta} at the same s:
// returns |lhs - rhs| and |lhs| from direct sums at n <= T. Diagnostic only.
struct FunctionalEquationProbe {
  double residual = 0.0;
  double lhs_abs = 0.0;
  double tail_bound = 0.0;
};
FunctionalEquationProbe functional_equation_probe(const EstermannPoint& p, std::uint64_t T);

}  // namespace divcorr
