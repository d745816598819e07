#include <algorithm>
#include "divcorr/special.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <string>
#include <vector>

#include "divcorr/errors.hpp"

namespace divcorr {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// B_{2j} / (2j)! for j = 1..13.
constexpr std::array<double, 13> kBernoulliOverFactorial = {
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
    -3617.0 / 510.0 / 20922789888000.0,
    43867.0 / 798.0 / 6402373705728000.0,
    -174611.0 / 330.0 / 2432902008176640000.0,
    854513.0 / 138.0 / 1.1240007277776077e21,
    -236364091.0 / 2730.0 / 6.204484017332394e23,
    8553103.0 / 6.0 / 4.0329146112660565e26};

void check_finite(Complex v, const char* what) {
  require(std::isfinite(v.real()) && std::isfinite(v.imag()), ErrorKind::domain,
          std::string(what) + ": result not finite");
}

bool is_nonpositive_integer(Complex z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && std::floor(z.real()) == z.real();
}

double distance_to_gamma_pole(Complex z) {
  if (z.real() > 0.5) return std::abs(z);
  const double n = std::min(0.0, std::round(z.real()));
  return std::abs(z - Complex(n, 0.0));
}

// Right half-plane Lanczos sum.
Complex gamma_lanczos(Complex z) {
  z -= 1.0;
  Complex x = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (z + static_cast<double>(i));
  const Complex t = z + kLanczosG + 0.5;
  return std::sqrt(2.0 * kPi) * std::exp((z + 0.5) * std::log(t) - t) * x;
}

void sincos_pi_real(double x, double& s, double& c) {
  // Reduce to r in [-1/2, 1/2] with x = r + n.
  const double n = std::round(x);
  const double r = x - n;
  if (std::abs(r) == 0.5) {  // exact zeros of cos at half-integers
    s = r > 0 ? 1.0 : -1.0;
    c = 0.0;
  } else {
    s = std::sin(kPi * r);
    c = std::cos(kPi * r);
  }
  if (std::fmod(std::abs(n), 2.0) == 1.0) {
    s = -s;
    c = -c;
  }
}

}  // namespace

Complex sin_pi(Complex z) {
  double s, c;
  sincos_pi_real(z.real(), s, c);
  const double y = kPi * z.imag();
  return {s * std::cosh(y), c * std::sinh(y)};
}

Complex cos_pi(Complex z) {
  double s, c;
  sincos_pi_real(z.real(), s, c);
  const double y = kPi * z.imag();
  return {c * std::cosh(y), -s * std::sinh(y)};
}

Complex gamma(Complex z) {
  require(!is_nonpositive_integer(z), ErrorKind::pole,
          "gamma: pole at z = " + std::to_string(z.real()));
  Complex v;
  if (z.real() < 0.5)
    v = kPi / (sin_pi(z) * gamma_lanczos(1.0 - z));
  else
    v = gamma_lanczos(z);
  check_finite(v, "gamma");
  return v;
}

double gamma(double x) { return gamma(Complex(x, 0.0)).real(); }

Complex rgamma(Complex z) {
  if (is_nonpositive_integer(z)) return 0.0;
  if (z.real() < 0.5) return sin_pi(z) * gamma_lanczos(1.0 - z) / kPi;
  return 1.0 / gamma_lanczos(z);
}

Complex zeta(Complex s) {
  require(s.real() > 1.0 + kZetaDelta, ErrorKind::domain,
          "zeta: requires Re(s) > 1 + 1e-3, got Re(s) = " + std::to_string(s.real()));
  // Euler-Maclaurin with N terms and 13 Bernoulli corrections. N grows with |s| so
  // the correction series decays like (|s| / (2 pi N))^{2j}.
  const int n_terms = 30 + static_cast<int>(std::ceil(std::abs(s)));
  std::vector<Complex> head(static_cast<std::size_t>(n_terms - 1));
  for (int n = 1; n < n_terms; ++n) head[static_cast<std::size_t>(n - 1)] = std::exp(-s * std::log(static_cast<double>(n)));
  // Sum smallest terms first.
  Complex sum = 0.0;
  for (auto it = head.rbegin(); it != head.rend(); ++it) sum += *it;
  const double N = n_terms;
  const Complex n_pow = std::exp(-s * std::log(N));  // N^{-s}
  sum += N * n_pow / (s - 1.0) + 0.5 * n_pow;
  Complex rising = s;         // s (s+1) ... (s + 2j - 2)
  Complex power = n_pow / N;  // N^{-s-2j+1}
  for (std::size_t j = 0; j < kBernoulliOverFactorial.size(); ++j) {
    sum += kBernoulliOverFactorial[j] * rising * power;
    rising *= (s + static_cast<double>(2 * j + 1)) * (s + static_cast<double>(2 * j + 2));
    power /= N * N;
  }
  check_finite(sum, "zeta");
  return sum;
}

double zeta(double s) { return zeta(Complex(s, 0.0)).real(); }

double gamma_subset_identity_residual(std::span<const Complex> z) {
  const std::size_t n = z.size();
  require(n >= 1 && n <= 20, ErrorKind::precondition, "gamma subset identity: need 1 <= |I| <= 20");
  Complex total = 0.0;
  for (Complex zi : z) total += zi;
  require(std::abs(total - 1.0) <= 1e-12, ErrorKind::precondition,
          "gamma subset identity: entries must sum to 1");
  for (Complex zi : z) {
    require(distance_to_gamma_pole(zi) > 1e-6 && distance_to_gamma_pole(zi / 2.0) > 1e-6 &&
                distance_to_gamma_pole((1.0 - zi) / 2.0) > 1e-6,
            ErrorKind::precondition, "gamma subset identity: entry too close to a Gamma pole");
  }
  if (std::all_of(z.begin(), z.end(), [](Complex zi) { return zi.imag() == 0.0; })) {
    // Real points: both sides can reach 1e7 in size, so work in long double
    // (tgammal) to keep the absolute residual meaningful.
    long double prod = 1.0L, zsum = 0.0L;
    for (Complex zi : z) {
      prod *= std::tgammal(zi.real());
      zsum += zi.real();
    }
    long double lhs = 0.0L;
    for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
      long double sub = 0.0L;
      for (std::size_t i = 0; i < n; ++i)
        if (mask & (1u << i)) sub += z[i].real();
      const long double rest = zsum - sub;
      require(distance_to_gamma_pole(double(sub)) > 1e-6 && distance_to_gamma_pole(double(rest)) > 1e-6,
              ErrorKind::precondition, "gamma subset identity: subset sum too close to a Gamma pole");
      lhs += prod / (std::tgammal(sub) * std::tgammal(rest));
    }
    long double rhs = 2.0L * std::pow(3.141592653589793238462643383279502884L, (long double)n / 2.0L - 1.0L);
    for (Complex zi : z) rhs *= std::tgammal(zi.real() / 2.0L) / std::tgammal((1.0L - zi.real()) / 2.0L);
    return static_cast<double>(std::fabs(lhs - rhs));
  }

  Complex prod = 1.0;
  for (Complex zi : z) prod *= gamma(zi);

  // Gray-code walk: each step toggles one element, so the subset sum is updated in O(1).
  Complex lhs = 0.0;
  Complex subset_sum = 0.0;
  std::uint32_t mask = 0;
  const std::uint32_t full = (1u << n) - 1u;
  for (std::uint32_t step = 1; step < (1u << n); ++step) {
    const int bit = std::countr_zero(step);
    mask ^= 1u << bit;
    if (mask & (1u << bit))
      subset_sum += z[static_cast<std::size_t>(bit)];
    else
      subset_sum -= z[static_cast<std::size_t>(bit)];
    if (mask == full) continue;
    const Complex rest = total - subset_sum;
    require(distance_to_gamma_pole(subset_sum) > 1e-6 && distance_to_gamma_pole(rest) > 1e-6,
            ErrorKind::precondition, "gamma subset identity: subset sum too close to a Gamma pole");
    lhs += prod * rgamma(subset_sum) * rgamma(rest);
  }

  Complex rhs = 2.0 * std::pow(kPi, static_cast<double>(n) / 2.0 - 1.0);
  for (Complex zi : z) rhs *= gamma(zi / 2.0) * rgamma((1.0 - zi) / 2.0);
  return std::abs(lhs - rhs);
}

double beta_multinomial_identity_residual(std::span<const Complex> s, unsigned r) {
  const std::size_t m = s.size();
  require(m >= 1, ErrorKind::precondition, "beta identity: need at least one s_i");
  for (Complex si : s) require(si.real() > 0.0, ErrorKind::precondition, "beta identity: need Re(s_i) > 0");
  Complex sum_s = 0.0;
  for (Complex si : s) sum_s += si;

  std::vector<double> log_fact(r + 1, 0.0);
  for (unsigned i = 1; i <= r; ++i) log_fact[i] = log_fact[i - 1] + std::log(static_cast<double>(i));

  // Walk all compositions of r into m parts in lexicographic order.
  std::vector<unsigned> parts(m, 0);
  parts[m - 1] = r;
  Complex lhs = 0.0;
  const Complex denom = rgamma(static_cast<double>(r) + sum_s);
  for (;;) {
    double log_coeff = log_fact[r];
    Complex term = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      log_coeff -= log_fact[parts[i]];
      term *= gamma(s[i] + static_cast<double>(parts[i]));
    }
    lhs += std::exp(log_coeff) * term * denom;
    // Next composition: move one unit from the last part to the rightmost
    // position that can accept it, then push the remainder to the end.
    if (m == 1) break;
    std::size_t i = m - 1;
    while (i > 0 && parts[i] == 0) --i;
    if (i == 0) break;
    const unsigned carry = parts[i] - 1;
    parts[i] = 0;
    ++parts[i - 1];
    parts[m - 1] = carry;
  }
  Complex rhs = rgamma(sum_s);
  for (Complex si : s) rhs *= gamma(si);
  return std::abs(lhs - rhs);
}

}  // namespace divcorr
