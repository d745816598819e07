#pragma once

// Complex Gamma and Riemann zeta in the regions the constants need, plus two
// Gamma/Beta identities exposed as residual functions.

#include <complex>
#include <span>

namespace divcorr {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// sin(pi z) with exact argument reduction on the real part.
Complex sin_pi(Complex z);
Complex cos_pi(Complex z);

// Lanczos (g = 7, 9 terms) with reflection for Re z < 1/2.
// Throws ErrorKind::pole at z in {0, -1, -2, ...}; never returns NaN/Inf.
Complex gamma(Complex z);
double gamma(double x);
// 1/Gamma(z), entire: 0 at the poles of Gamma.
Complex rgamma(Complex z);

// Largest real part below which zeta() refuses to evaluate.
inline constexpr double kZetaDelta = 1e-3;

// Euler-Maclaurin summation; defined for Re s > 1 + kZetaDelta only.
Complex zeta(Complex s);
double zeta(double s);

// |sum_{H subset I} prod Gamma(z_i) / (Gamma(sum_H z) Gamma(sum_{I\H} z))
//   - 2 pi^{|I|/2 - 1} prod Gamma(z_i/2)/Gamma((1 - z_i)/2)|
// for sum z_i = 1. The empty and full subsets contribute 0. |I| <= 20.
double gamma_subset_identity_residual(std::span<const Complex> z);

// |sum over compositions r_1 + ... + r_m = r of r!/(r_1!...r_m!) prod Gamma(s_i + r_i) / Gamma(r + sum s)
//   - prod Gamma(s_i) / Gamma(sum s)|, requires Re s_i > 0 and m >= 1.
double beta_multinomial_identity_residual(std::span<const Complex> s, unsigned r);

}  // namespace divcorr
