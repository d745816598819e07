#include "divcorr/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "divcorr/config.hpp"
#include "divcorr/errors.hpp"

namespace divcorr {

namespace {

using u128 = unsigned __int128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mul_mod(r, b, m);
    b = mul_mod(b, b, m);
    e >>= 1;
  }
  return r;
}

const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    std::vector<std::uint32_t> out;
    for (std::uint32_t n = 2; n < 1000; ++n) {
      bool prime = true;
      for (std::uint32_t p : out) {
        if (p * p > n) break;
        if (n % p == 0) {
          prime = false;
          break;
        }
      }
      if (prime) out.push_back(n);
    }
    return out;
  }();
  return primes;
}

// Brent's variant; parameters come from the config so runs are reproducible.
std::uint64_t pollard_rho(std::uint64_t n) {
  if (n % 2 == 0) return 2;
  std::uint64_t c = config().rho_increment % n;
  std::uint64_t start = config().rho_seed % n;
  for (;;) {
    std::uint64_t y = start, x = 0, q = 1, g = 1, ys = 0;
    const std::uint64_t batch = 128;
    std::uint64_t r = 1;
    auto f = [&](std::uint64_t v) { return (mul_mod(v, v, n) + c) % n; };
    do {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      std::uint64_t k = 0;
      do {
        ys = y;
        for (std::uint64_t i = 0; i < std::min(batch, r - k); ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += batch;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
    c = (c + 1) % n;  // deterministic retry with the next polynomial
    start = (start + 1) % n;
  }
}

void split(std::uint64_t n, std::vector<std::uint64_t>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  const std::uint64_t d = pollard_rho(n);
  split(d, out);
  split(n / d, out);
}

FactoredInteger collect(std::uint64_t value, std::vector<std::uint64_t> primes) {
  std::sort(primes.begin(), primes.end());
  FactoredInteger f;
  f.value = value;
  for (std::uint64_t p : primes) {
    if (!f.factors.empty() && f.factors.back().prime == p)
      ++f.factors.back().exponent;
    else
      f.factors.push_back({p, 1});
  }
  return f;
}

}  // namespace

bool FactoredInteger::is_valid() const {
  if (value == 0) return false;
  u128 prod = 1;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (factors[i].exponent < 1 || !is_prime(factors[i].prime)) return false;
    if (i > 0 && factors[i].prime <= factors[i - 1].prime) return false;
    for (int e = 0; e < factors[i].exponent; ++e) {
      prod *= factors[i].prime;
      if (prod > value) return false;
    }
  }
  return prod == value;
}

SieveTable::SieveTable(std::uint64_t limit) : limit_(limit) {
  require(limit >= 1, ErrorKind::precondition, "sieve limit must be >= 1");
  const std::size_t n = static_cast<std::size_t>(limit) + 1;
  spf_.assign(n, 0);
  d_.assign(n, 0);
  mu_.assign(n, 0);
  phi_.assign(n, 0);
  std::vector<std::uint8_t> spf_exp(n, 0);
  d_[1] = 1;
  mu_[1] = 1;
  phi_[1] = 1;
  spf_[1] = 1;
  for (std::size_t i = 2; i < n; ++i) {
    if (spf_[i] == 0) {
      spf_[i] = static_cast<std::uint32_t>(i);
      primes_.push_back(static_cast<std::uint32_t>(i));
      d_[i] = 2;
      mu_[i] = -1;
      phi_[i] = static_cast<std::uint32_t>(i - 1);
      spf_exp[i] = 1;
    }
    for (std::uint32_t p : primes_) {
      const std::size_t ip = i * p;
      if (p > spf_[i] || ip >= n) break;
      spf_[ip] = p;
      if (p == spf_[i]) {
        spf_exp[ip] = static_cast<std::uint8_t>(spf_exp[i] + 1);
        d_[ip] = d_[i] / (spf_exp[i] + 1) * (spf_exp[i] + 2);
        mu_[ip] = 0;
        phi_[ip] = phi_[i] * p;
      } else {
        spf_exp[ip] = 1;
        d_[ip] = d_[i] * 2;
        mu_[ip] = static_cast<std::int8_t>(-mu_[i]);
        phi_[ip] = phi_[i] * (p - 1);
      }
    }
  }
}

FactoredInteger SieveTable::factorize(std::uint64_t n) const {
  require(n >= 1 && n <= limit_, ErrorKind::precondition, "factorize: n outside sieve range");
  FactoredInteger f;
  f.value = n;
  while (n > 1) {
    const std::uint32_t p = spf_[n];
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.factors.push_back({p, e});
  }
  return f;
}

SieveTable build_sieve(std::uint64_t limit) {
  require(limit >= 1, ErrorKind::precondition, "sieve limit must be >= 1");
  require(limit <= config().max_sieve, ErrorKind::budget,
          "sieve limit " + std::to_string(limit) + " exceeds cap " + std::to_string(config().max_sieve));
  return SieveTable(limit);
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++s;
  }
  // These bases are deterministic for every 64-bit n.
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

FactoredInteger factorize(std::uint64_t n) {
  require(n >= 1, ErrorKind::precondition, "factorize: n must be >= 1");
  const std::uint64_t value = n;
  std::vector<std::uint64_t> primes;
  for (std::uint32_t p : small_primes()) {
    if (static_cast<std::uint64_t>(p) * p > n) break;
    while (n % p == 0) {
      primes.push_back(p);
      n /= p;
    }
  }
  if (n > 1) split(n, primes);
  return collect(value, std::move(primes));
}

std::vector<std::uint64_t> divisors(const FactoredInteger& f) {
  std::vector<std::uint64_t> out{1};
  for (const auto& [p, e] : f.factors) {
    const std::size_t base = out.size();
    std::uint64_t pk = 1;
    for (int j = 1; j <= e; ++j) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t divisor_count(const FactoredInteger& f) {
  std::uint64_t d = 1;
  for (const auto& pe : f.factors) d *= static_cast<std::uint64_t>(pe.exponent + 1);
  return d;
}

std::uint64_t euler_phi(const FactoredInteger& f) {
  std::uint64_t phi = 1;
  for (const auto& [p, e] : f.factors) {
    phi *= p - 1;
    for (int j = 1; j < e; ++j) phi *= p;
  }
  return phi;
}

int mobius(const FactoredInteger& f) {
  for (const auto& pe : f.factors)
    if (pe.exponent > 1) return 0;
  return f.factors.size() % 2 == 0 ? 1 : -1;
}

int valuation(std::uint64_t n, std::uint64_t p) {
  require(n != 0 && p >= 2, ErrorKind::precondition, "valuation: need n != 0, p >= 2");
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

Complex tau_shifted(std::uint64_t n, Complex alpha, Complex beta) {
  require(n >= 1, ErrorKind::precondition, "tau_shifted: n must be >= 1");
  return tau_shifted(factorize(n), alpha, beta);
}

Complex tau_shifted(const FactoredInteger& f, Complex alpha, Complex beta) {
  // Multiplicative: the local factor at p^e is sum_{j=0}^{e} p^{-j alpha} p^{-(e-j) beta}.
  Complex result = 1.0;
  for (const auto& [p, e] : f.factors) {
    const double lp = std::log(static_cast<double>(p));
    Complex local = 0.0;
    for (int j = 0; j <= e; ++j) local += std::exp(-(static_cast<double>(j) * alpha + static_cast<double>(e - j) * beta) * lp);
    result *= local;
  }
  return result;
}

Complex sigma_power(std::uint64_t n, Complex gamma) {
  require(n >= 1, ErrorKind::precondition, "sigma_power: n must be >= 1");
  return sigma_power(factorize(n), gamma);
}

Complex sigma_power(const FactoredInteger& f, Complex gamma) {
  Complex result = 1.0;
  for (const auto& [p, e] : f.factors) {
    const Complex step = std::exp(gamma * std::log(static_cast<double>(p)));
    Complex local = 1.0, term = 1.0;
    for (int j = 1; j <= e; ++j) {
      term *= step;
      local += term;
    }
    result *= local;
  }
  return result;
}

double sigma_power(std::uint64_t n, double gamma) { return sigma_power(n, Complex(gamma, 0.0)).real(); }

std::int64_t ramanujan_sum(std::uint64_t l, std::int64_t m) {
  require(l >= 1, ErrorKind::precondition, "ramanujan_sum: l must be >= 1");
  const std::uint64_t am = m < 0 ? static_cast<std::uint64_t>(-(m + 1)) + 1 : static_cast<std::uint64_t>(m);
  const std::uint64_t g = std::gcd(l, am);  // gcd(l, 0) = l
  std::int64_t sum = 0;
  for (std::uint64_t d : divisors(factorize(g))) {
    const int mu = mobius(factorize(l / d));
    sum += mu * static_cast<std::int64_t>(d);
  }
  return sum;
}

}  // namespace divcorr
