#pragma once

// Exact integer kernels: sieve tables, factorization, multiplicative
// functions, shifted divisor sums and Ramanujan sums.

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

namespace divcorr {

using Complex = std::complex<double>;

struct PrimePower {
  std::uint64_t prime;
  int exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// n = prod p^e with primes strictly increasing and every e >= 1; 1 has no factors.
struct FactoredInteger {
  std::uint64_t value = 1;
  std::vector<PrimePower> factors;

  bool is_valid() const;
};

// Immutable arithmetic tables for 1..limit; index 0 is unused.
class SieveTable {
 public:
  explicit SieveTable(std::uint64_t limit);

  std::uint64_t limit() const noexcept { return limit_; }
  std::uint32_t d(std::uint64_t n) const { return d_[n]; }
  int mu(std::uint64_t n) const { return mu_[n]; }
  std::uint64_t phi(std::uint64_t n) const { return phi_[n]; }
  std::uint32_t spf(std::uint64_t n) const { return spf_[n]; }
  const std::vector<std::uint32_t>& primes() const noexcept { return primes_; }
  const std::vector<std::uint32_t>& divisor_counts() const noexcept { return d_; }

  FactoredInteger factorize(std::uint64_t n) const;  // requires 1 <= n <= limit

 private:
  std::uint64_t limit_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint32_t> d_;
  std::vector<std::int8_t> mu_;
  std::vector<std::uint32_t> phi_;
  std::vector<std::uint32_t> primes_;
};

// Throws ErrorKind::budget (limit exceeded) above Config::max_sieve.
SieveTable build_sieve(std::uint64_t limit);

bool is_prime(std::uint64_t n);
FactoredInteger factorize(std::uint64_t n);

std::vector<std::uint64_t> divisors(const FactoredInteger& f);  // ascending
std::uint64_t divisor_count(const FactoredInteger& f);
std::uint64_t euler_phi(const FactoredInteger& f);
int mobius(const FactoredInteger& f);
int valuation(std::uint64_t n, std::uint64_t p);  // n != 0

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);

// tau_{alpha,beta}(n) = sum_{d1 d2 = n} d1^{-alpha} d2^{-beta}
Complex tau_shifted(std::uint64_t n, Complex alpha, Complex beta);
Complex tau_shifted(const FactoredInteger& f, Complex alpha, Complex beta);
// sigma_gamma(n) = sum_{d | n} d^gamma
Complex sigma_power(std::uint64_t n, Complex gamma);
Complex sigma_power(const FactoredInteger& f, Complex gamma);
double sigma_power(std::uint64_t n, double gamma);

// c_l(m) = sum_{d | (l, |m|)} mu(l/d) d; c_l(0) = phi(l).
std::int64_t ramanujan_sum(std::uint64_t l, std::int64_t m);

}  // namespace divcorr
