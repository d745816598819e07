#pragma once

// The correlation series A_a(s) = sum over a.n = 0 of d(n_1)...d(n_k) / (n_1...n_k)^s,
// its coefficients h_a(n), shifted variants, the smoothed sum and the
// log-polynomial fit of its main term.

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "divcorr/constants.hpp"
#include "divcorr/truncated.hpp"

namespace divcorr {

using Complex = std::complex<double>;

// h_a(n) for n = 1..Nmax (entry i holds (i + 1, h_a(i + 1))).
std::vector<std::pair<std::uint64_t, std::uint64_t>> h_coefficients(const CoefficientVector& a,
                                                                     std::uint64_t Nmax);

enum class Normalization {
  plain,    // prod d(n_i) / n_i^s
  shifted,  // prod tau_{alpha_i, beta_i}(n_i) / n_i^{1/2 + s}
};

// Sum over solutions with max n_i <= T. For the plain normalization alpha and
// beta must be empty. Throws ErrorKind::domain unless the series converges
// absolutely at s with some margin.
TruncatedValue partial_sum_A(const CoefficientVector& a, Complex s, std::span<const Complex> alpha,
                             std::span<const Complex> beta, std::uint64_t T,
                             Normalization norm = Normalization::plain);
TruncatedValue partial_sum_A(const CoefficientVector& a, Complex s, std::uint64_t T);

// zeta(2s)^4 / zeta(4s): A_{(1,-1)}(s) in closed form.
Complex closed_form_k2(Complex s);

struct SmoothWeight {
  enum class Kind { standard_bump };
  Kind kind = Kind::standard_bump;
  double normalization = 1.0;
  // Phi^{(j)}(x) << j^{B j}; the bump exp(1 - 1/(1 - x^2)) qualifies with B = 2.
  double derivative_cap_B = 2.0;

  double operator()(double x) const;
  // int_0^1 Phi(x) x^{s-1} dx, Re s > 0.
  Complex mellin(Complex s) const;
};

// sum over solutions of prod d(n_i) Phi(n_1...n_k / X^k).
double smoothed_sum(const CoefficientVector& a, const SmoothWeight& phi, double X);

struct FitResult {
  std::string model;
  std::vector<double> coefficients;
  double residual_norm = 0.0;
  double condition_estimate = 0.0;
  std::pair<double, double> sample_range{0.0, 0.0};
};

// Weighted least squares of S(X) against sum_{j=0}^{k} c_j (log X)^j X^{k-1};
// with lower_order, also the terms (log X)^j X^{k-k/i}, (k+2)/2 <= i < k, j <= i.
// Coefficients are ordered main term first, by increasing j.
FitResult fit_main_terms(std::span<const std::pair<double, double>> samples, int k, bool lower_order = false);

// |sum_{n<=T} sigma_alpha(n) sigma_beta(n) / n^s
//   - zeta(s) zeta(s-alpha) zeta(s-beta) zeta(s-alpha-beta) / zeta(2s-alpha-beta)|
IdentityResidual quadruple_zeta_residual(Complex s, Complex alpha, Complex beta, std::uint64_t T);

}  // namespace divcorr
