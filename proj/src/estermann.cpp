#include "divcorr/estermann.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "divcorr/arith.hpp"
#include "divcorr/config.hpp"
#include "divcorr/errors.hpp"
#include "divcorr/parallel.hpp"
#include "divcorr/special.hpp"
#include "divcorr/tails.hpp"

namespace divcorr {

namespace {

std::uint64_t abs_u64(std::int64_t v) {
  return v < 0 ? static_cast<std::uint64_t>(-(v + 1)) + 1 : static_cast<std::uint64_t>(v);
}

void check_terms(double n, const char* what) {
  require(n <= config().max_terms, ErrorKind::budget, std::string(what) + ": term count exceeds max_terms");
}

// e(r / l) for 0 <= r < l
Complex additive_character(std::uint64_t r, std::uint64_t l) {
  const double t = 2.0 * static_cast<double>(r) / static_cast<double>(l);
  return {cos_pi(Complex(t, 0.0)).real(), sin_pi(Complex(t, 0.0)).real()};
}

std::int64_t inverse_mod(std::int64_t h, std::uint64_t l) {
  if (l == 1) return 0;
  __int128 t = 0, nt = 1, r = l, nr = ((h % static_cast<__int128>(l)) + l) % l;
  while (nr != 0) {
    const __int128 q = r / nr;
    t -= q * nt;
    std::swap(t, nt);
    r -= q * nr;
    std::swap(r, nr);
  }
  return static_cast<std::int64_t>(t < 0 ? t + l : t);
}

}  // namespace

TruncatedValue estermann_direct(const EstermannPoint& p, std::uint64_t T) {
  require(p.l >= 1 && T >= 1, ErrorKind::precondition, "estermann_direct: needs l >= 1 and T >= 1");
  require(std::gcd(abs_u64(p.h), p.l) == 1, ErrorKind::precondition, "estermann_direct: needs gcd(h, l) = 1");
  // |tau_{alpha,beta}(n)| <= d(n) n^{-min(Re alpha, Re beta)}
  const double sigma = p.s.real() + std::min(p.alpha.real(), p.beta.real());
  require(sigma > 1.0 + 2.0 * kZetaDelta, ErrorKind::domain, "estermann_direct: s outside the region of absolute convergence");
  check_terms(static_cast<double>(T), "estermann_direct");

  const SieveTable sieve = build_sieve(T);
  const bool unshifted = p.alpha == Complex{} && p.beta == Complex{};
  const auto l = static_cast<__int128>(p.l);
  const __int128 h = ((p.h % l) + l) % l;
  std::vector<Complex> terms(T);
  std::vector<double> mag(T);
  parallel_for(T, [&](std::size_t idx) {
    const std::uint64_t n = idx + 1;
    const Complex tau = unshifted ? Complex(sieve.d(n)) : tau_shifted(sieve.factorize(n), p.alpha, p.beta);
    const auto r = static_cast<std::uint64_t>((h * n) % l);
    terms[idx] = tau * additive_character(r, p.l) * std::exp(-p.s * std::log(static_cast<double>(n)));
    mag[idx] = std::abs(terms[idx]);
  }, 4096);

  TruncatedValue out;
  out.value = pairwise_sum(terms);
  out.cutoff = T;
  out.terms_used = T;
  out.tail_bound = rankin_tail(static_cast<double>(T), sigma, 2) +
                   rounding_allowance(static_cast<double>(T), pairwise_sum(mag));
  return out;
}

ChiFactor chi_factor(int sign, Complex s, Complex alpha, Complex beta) {
  require(sign == 1 || sign == -1, ErrorKind::precondition, "chi_factor: sign must be +1 or -1");
  const Complex u = sign == 1 ? (s + alpha) - (s + beta) : (s + alpha) + (s + beta);
  ChiFactor out;
  out.sign = sign;
  out.value = 2.0 * std::exp((2.0 * s - 2.0 + alpha + beta) * std::log(2.0 * kPi)) * gamma(1.0 - s - alpha) *
              gamma(1.0 - s - beta) * cos_pi(u / 2.0);
  return out;
}

TruncatedValue estermann_reduced_sum(Complex s, std::uint64_t l, std::uint64_t T) {
  require(l >= 1 && T >= 1, ErrorKind::precondition, "estermann_reduced_sum: needs l >= 1 and T >= 1");
  require(s.real() > 1.0 + 2.0 * kZetaDelta, ErrorKind::domain, "estermann_reduced_sum: needs Re s > 1 + delta");
  check_terms(static_cast<double>(T), "estermann_reduced_sum");
  const SieveTable sieve = build_sieve(T);
  std::vector<Complex> terms(T);
  std::vector<double> mag(T);
  parallel_for(T, [&](std::size_t idx) {
    const std::uint64_t n = idx + 1;
    const auto c = static_cast<double>(ramanujan_sum(l, static_cast<std::int64_t>(n)));
    terms[idx] = static_cast<double>(sieve.d(n)) * c * std::exp(-s * std::log(static_cast<double>(n)));
    mag[idx] = std::abs(terms[idx]);
  }, 4096);
  TruncatedValue out;
  out.value = pairwise_sum(terms);
  out.cutoff = T;
  out.terms_used = T;
  // |c_l(n)| <= phi(l): the tail is at most phi(l) sum_{n>T} d(n) n^{-sigma}
  out.tail_bound = static_cast<double>(euler_phi(factorize(l))) * rankin_tail(static_cast<double>(T), s.real(), 2) +
                   rounding_allowance(static_cast<double>(T), pairwise_sum(mag));
  return out;
}

std::uint64_t averaged_identity_cutoff(std::uint64_t L) { return std::max<std::uint64_t>(1'000'000, 500 * L); }

IdentityResidual averaged_identity_residual(Complex s, Complex w, std::uint64_t L, std::uint64_t T) {
  require(L >= 1, ErrorKind::precondition, "averaged_identity_residual: L must be >= 1");
  const double d = kZetaDelta;
  require(s.real() > 1.0 + d && w.real() > 1.0 + d && (s + w).real() > 2.0 + d && (2.0 * s + w).real() > 2.0 + d,
          ErrorKind::domain, "averaged_identity_residual: outside Re s, Re w > 1, Re(s+w), Re(2s+w) > 2");
  if (T == 0) T = averaged_identity_cutoff(L);
  require(T >= L, ErrorKind::precondition, "averaged_identity_residual: needs T >= L");
  check_terms(static_cast<double>(T) * (1.0 + std::log(static_cast<double>(L))), "averaged_identity_residual");
  const double sigma = s.real(), omega = w.real();

  // sum_{l<=L} l^{-w} c_l(n) = sum_{d | n, d <= L} d^{1-w} M(L/d),  M(y) = sum_{e<=y} mu(e) e^{-w}
  const SieveTable sieve = build_sieve(T);
  std::vector<Complex> M(L + 1);
  for (std::uint64_t e = 1; e <= L; ++e)
    M[e] = M[e - 1] + static_cast<double>(sieve.mu(e)) * std::exp(-w * std::log(static_cast<double>(e)));
  std::vector<Complex> G(T + 1);
  for (std::uint64_t dd = 1; dd <= L; ++dd) {
    const Complex coef = std::exp((1.0 - w) * std::log(static_cast<double>(dd))) * M[L / dd];
    for (std::uint64_t n = dd; n <= T; n += dd) G[n] += coef;
  }
  std::vector<Complex> terms(T);
  std::vector<double> mag(T);
  parallel_for(T, [&](std::size_t idx) {
    const std::uint64_t n = idx + 1;
    terms[idx] = static_cast<double>(sieve.d(n)) * std::exp(-s * std::log(static_cast<double>(n))) * G[n];
    mag[idx] = std::abs(terms[idx]);
  }, 4096);
  const Complex lhs = pairwise_sum(terms);
  const Complex zs = zeta(s), zsw = zeta(s + w - 1.0);
  const Complex rhs = zs * zs * zsw * zsw / (zeta(w) * zeta(2.0 * s + w - 1.0));

  // l-tail: sum_n d(n) |c_l(n)| n^{-sigma} <= zeta(sigma)^2 sum_{d|l} d(d) d^{1-sigma}, which is
  // <= zeta(sigma-1)^2 when sigma > 2, and <= d_3(l) otherwise.
  const double zsig = zeta(sigma);
  double l_tail;
  if (sigma > 2.0 + 2.0 * d) {
    const double z1 = zeta(sigma - 1.0);
    l_tail = zsig * zsig * z1 * z1 * std::pow(static_cast<double>(L), 1.0 - omega) / (omega - 1.0);
  } else {
    l_tail = zsig * zsig * rankin_tail(static_cast<double>(L), omega, 3);
  }
  // n-tail: writing n = d m with d | l, sum_{n>T} d(n) |c_l(n)| n^{-sigma}
  //   <= sum_{d|l} d(d) d^{1-sigma} sum_{m > T/d} d(m) m^{-sigma}.
  const RankinBound rankin(sigma, 2);
  double n_tail = 0.0;
  const double zw = zeta(omega);
  for (std::uint64_t dd = 1; dd <= L; ++dd) {
    const double dv = static_cast<double>(dd);
    n_tail += sieve.d(dd) * std::pow(dv, 1.0 - sigma - omega) * zw * rankin(static_cast<double>(T) / dv);
  }
  IdentityResidual out;
  out.residual = std::abs(lhs - rhs);
  out.bound = l_tail + n_tail + rounding_allowance(static_cast<double>(T), pairwise_sum(mag)) + 1e-11 * std::abs(rhs);
  return out;
}

IdentityResidual ramanujan_formula_residual(Complex s, std::int64_t m, std::uint64_t L) {
  require(m >= 1 && L >= 1, ErrorKind::precondition, "ramanujan_formula_residual: needs m >= 1 and L >= 1");
  require(s.real() > 1.0 + 2.0 * kZetaDelta, ErrorKind::domain, "ramanujan_formula_residual: needs Re s > 1 + delta");
  std::vector<Complex> terms(L);
  std::vector<double> mag(L);
  parallel_for(L, [&](std::size_t idx) {
    const std::uint64_t l = idx + 1;
    terms[idx] = static_cast<double>(ramanujan_sum(l, m)) * std::exp(-s * std::log(static_cast<double>(l)));
    mag[idx] = std::abs(terms[idx]);
  }, 1024);
  const Complex z = zeta(s);
  const Complex lhs = z * pairwise_sum(terms);
  const Complex rhs = sigma_power(static_cast<std::uint64_t>(m), 1.0 - s);
  // |c_l(m)| <= sigma_1(m), sum_{l>L} l^{-sigma} <= L^{1-sigma} / (sigma - 1)
  const double sigma = s.real();
  const double s1 = sigma_power(static_cast<std::uint64_t>(m), 1.0);
  IdentityResidual out;
  out.residual = std::abs(lhs - rhs);
  out.bound = std::abs(z) * (s1 * std::pow(static_cast<double>(L), 1.0 - sigma) / (sigma - 1.0) +
                             rounding_allowance(static_cast<double>(L), pairwise_sum(mag))) +
              1e-11 * (std::abs(rhs) + std::abs(lhs));
  return out;
}

FunctionalEquationProbe functional_equation_probe(const EstermannPoint& p, std::uint64_t T) {
  const TruncatedValue lhs = estermann_direct(p, T);
  const std::int64_t hbar = inverse_mod(p.h, p.l);
  EstermannPoint plus{-p.alpha, -p.beta, p.s, hbar, p.l};
  EstermannPoint minus{-p.alpha, -p.beta, p.s, -hbar, p.l};
  const TruncatedValue dp = estermann_direct(plus, T);
  const TruncatedValue dm = estermann_direct(minus, T);
  const Complex cp = chi_factor(1, p.s, p.alpha, p.beta).value;
  const Complex cm = chi_factor(-1, p.s, p.alpha, p.beta).value;
  const Complex scale = std::exp((1.0 - 2.0 * p.s - p.alpha - p.beta) * std::log(static_cast<double>(p.l)));
  const Complex rhs = scale * (cp * dp.value - cm * dm.value);
  FunctionalEquationProbe out;
  out.residual = std::abs(lhs.value - rhs);
  out.lhs_abs = std::abs(lhs.value);
  out.tail_bound = lhs.tail_bound + std::abs(scale) * (std::abs(cp) * dp.tail_bound + std::abs(cm) * dm.tail_bound);
  return out;
}

}  // namespace divcorr
