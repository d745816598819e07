#pragma once

// Explicit arithmetic constants attached to a coefficient vector a: the local
// density product rho(a), kappa(a), the leading polar coefficient and the
// singular series, each with an independent cross-check route.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "divcorr/truncated.hpp"

namespace divcorr {

using RationalValue = boost::multiprecision::cpp_rational;

class CoefficientVector {
 public:
  CoefficientVector(std::initializer_list<std::int64_t> a);
  explicit CoefficientVector(std::vector<std::int64_t> a);

  int k() const noexcept { return static_cast<int>(a_.size()); }
  std::int64_t operator[](std::size_t i) const { return a_[i]; }
  const std::vector<std::int64_t>& entries() const noexcept { return a_; }
  std::uint64_t abs(std::size_t i) const;
  int r_plus() const noexcept { return r_plus_; }
  std::uint64_t gcd() const noexcept { return gcd_; }
  bool mixed_signs() const noexcept { return r_plus_ > 0 && r_plus_ < k(); }
  // |a_1 ... a_k| as an exact integer.
  boost::multiprecision::cpp_int product_abs() const;
  double log_product_abs() const;
  std::uint64_t sum_abs() const;
  std::vector<std::uint64_t> prime_divisors_of_product() const;

  CoefficientVector scaled(std::int64_t q) const;
  CoefficientVector negated() const;
  CoefficientVector permuted(std::span<const std::size_t> order) const;

  std::string str() const;  // "-1,1,1"
  friend bool operator==(const CoefficientVector&, const CoefficientVector&) = default;

 private:
  std::vector<std::int64_t> a_;
  int r_plus_ = 0;
  std::uint64_t gcd_ = 0;
};

CoefficientVector parse_coefficients(const std::string& text);

// Exact rational value of the finite Euler product over p | a_1...a_k.
RationalValue rho(const CoefficientVector& a);
double to_double(const RationalValue& q);

// prod_{p | a_1...a_k} p^{m_p}, m_p the second-smallest p-valuation; needs gcd(a) = 1.
std::uint64_t kappa(const CoefficientVector& a);

// (zeta(k)/zeta(k-1)) (phi(kappa)/kappa) d(kappa) <= rho <= d(kappa).
// The upper inequality fails when a prime divides exactly one a_i (rho(-1,1,2) = 8/7
// with kappa = 1): such a prime contributes a local factor in (1, 1 + 1/p].
// upper_extended = d(kappa) prod_{p | a_1...a_k, p not | kappa} (1 + 1/p) always holds.
struct RhoBounds {
  double lower = 0.0;
  double rho = 0.0;
  std::uint64_t upper = 0;  // d(kappa)
  double upper_extended = 0.0;
  bool holds = false;           // literal two-sided inequality
  bool holds_extended = false;  // lower bound and upper_extended
};
RhoBounds rho_bounds(const CoefficientVector& a);
// rho_bounds(a).holds
bool rho_bounds_check(const CoefficientVector& a);

// Coefficient of the top-order pole at s = 1 - 1/k; 0 when all a_i share a sign.
double leading_constant(const CoefficientVector& a);

struct SingularSeries {
  TruncatedValue truncated;   // (1/2) sum_{l <= L} prod (a_i, l) phi(l) / l^k / zeta(k)^2
  double closed_form = 0.0;   // rho(a) zeta(k-1) / (2 zeta(k)^3)
};
SingularSeries singular_series(const CoefficientVector& a, std::uint64_t L);
double singular_series_closed_form(const CoefficientVector& a);

}  // namespace divcorr
