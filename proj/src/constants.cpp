#include "divcorr/constants.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "divcorr/arith.hpp"
#include "divcorr/config.hpp"
#include "divcorr/errors.hpp"
#include "divcorr/parallel.hpp"
#include "divcorr/special.hpp"

namespace divcorr {

using boost::multiprecision::cpp_int;

namespace {

std::uint64_t abs_u64(std::int64_t v) {
  return v < 0 ? static_cast<std::uint64_t>(-(v + 1)) + 1 : static_cast<std::uint64_t>(v);
}

std::size_t decimal_digits(const cpp_int& v) {
  if (v == 0) return 1;
  const auto bits = boost::multiprecision::msb(boost::multiprecision::abs(v)) + 1;
  return static_cast<std::size_t>(static_cast<double>(bits) * 0.30102999566398120) + 1;
}

void check_digits(const RationalValue& q) {
  const std::size_t cap = config().max_rational_digits;
  require(decimal_digits(boost::multiprecision::numerator(q)) <= cap &&
              decimal_digits(boost::multiprecision::denominator(q)) <= cap,
          ErrorKind::overflow, "rho: rational exceeds digit cap");
}

cpp_int ipow(std::uint64_t p, std::uint64_t e) {
  cpp_int r = 1;
  for (std::uint64_t i = 0; i < e; ++i) r *= p;
  return r;
}

RationalValue pow_rational(std::uint64_t p, std::int64_t e) {
  if (e >= 0) return RationalValue(ipow(p, static_cast<std::uint64_t>(e)));
  return RationalValue(cpp_int(1), ipow(p, static_cast<std::uint64_t>(-e)));
}

// 1 + sum_{m>=1} (1 - 1/p) p^m prod_i p^{-max(0, m - nu_i)}, split at M = max nu_i:
// for m > M the summand is (1 - 1/p) p^{V - (k-1) m} with V = sum nu_i, a geometric tail.
RationalValue local_numerator(std::uint64_t p, const std::vector<int>& nu) {
  const std::int64_t k = static_cast<std::int64_t>(nu.size());
  const std::int64_t M = *std::max_element(nu.begin(), nu.end());
  std::int64_t V = 0;
  for (int v : nu) V += v;
  const RationalValue one_minus = RationalValue(cpp_int(p - 1), cpp_int(p));
  RationalValue sum = 1;
  for (std::int64_t m = 1; m <= M; ++m) {
    std::int64_t e = m;
    for (int v : nu) e -= std::max<std::int64_t>(0, m - v);
    sum += one_minus * pow_rational(p, e);
  }
  // sum_{m >= M+1} p^{V - (k-1) m} = p^{V - (k-1)(M+1)} / (1 - p^{-(k-1)})
  const RationalValue ratio = pow_rational(p, -(k - 1));
  sum += one_minus * pow_rational(p, V - (k - 1) * (M + 1)) / (RationalValue(1) - ratio);
  return sum;
}

// 1 + (p - 1) / (p^k - p)
RationalValue local_denominator(std::uint64_t p, int k) {
  const cpp_int pk = ipow(p, static_cast<std::uint64_t>(k));
  return RationalValue(1) + RationalValue(cpp_int(p - 1), pk - p);
}

}  // namespace

CoefficientVector::CoefficientVector(std::initializer_list<std::int64_t> a)
    : CoefficientVector(std::vector<std::int64_t>(a)) {}

CoefficientVector::CoefficientVector(std::vector<std::int64_t> a) : a_(std::move(a)) {
  require(a_.size() >= 2, ErrorKind::precondition, "coefficient vector needs k >= 2 entries");
  for (std::int64_t v : a_) {
    require(v != 0, ErrorKind::precondition, "coefficient vector entries must be non-zero");
    require(v != std::numeric_limits<std::int64_t>::min(), ErrorKind::precondition, "coefficient out of range");
    if (v > 0) ++r_plus_;
    gcd_ = std::gcd(gcd_, abs_u64(v));
  }
}

std::uint64_t CoefficientVector::abs(std::size_t i) const { return abs_u64(a_[i]); }

cpp_int CoefficientVector::product_abs() const {
  cpp_int p = 1;
  for (std::size_t i = 0; i < a_.size(); ++i) p *= abs(i);
  return p;
}

double CoefficientVector::log_product_abs() const {
  double s = 0.0;
  for (std::size_t i = 0; i < a_.size(); ++i) s += std::log(static_cast<double>(abs(i)));
  return s;
}

std::uint64_t CoefficientVector::sum_abs() const {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < a_.size(); ++i) s += abs(i);
  return s;
}

std::vector<std::uint64_t> CoefficientVector::prime_divisors_of_product() const {
  std::set<std::uint64_t> primes;
  for (std::size_t i = 0; i < a_.size(); ++i)
    for (const auto& pe : factorize(abs(i)).factors) primes.insert(pe.prime);
  return {primes.begin(), primes.end()};
}

CoefficientVector CoefficientVector::scaled(std::int64_t q) const {
  std::vector<std::int64_t> out(a_);
  for (auto& v : out) v *= q;
  return CoefficientVector(std::move(out));
}

CoefficientVector CoefficientVector::negated() const { return scaled(-1); }

CoefficientVector CoefficientVector::permuted(std::span<const std::size_t> order) const {
  require(order.size() == a_.size(), ErrorKind::precondition, "permutation size mismatch");
  std::vector<std::int64_t> out;
  out.reserve(a_.size());
  for (std::size_t i : order) out.push_back(a_.at(i));
  return CoefficientVector(std::move(out));
}

std::string CoefficientVector::str() const {
  std::ostringstream o;
  for (std::size_t i = 0; i < a_.size(); ++i) o << (i ? "," : "") << a_[i];
  return o.str();
}

CoefficientVector parse_coefficients(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      fail(ErrorKind::precondition, "cannot parse coefficient '" + item + "'");
    }
    require(used == item.size(), ErrorKind::precondition, "cannot parse coefficient '" + item + "'");
    out.push_back(v);
  }
  return CoefficientVector(std::move(out));
}

RationalValue rho(const CoefficientVector& a) {
  RationalValue result = 1;
  for (std::uint64_t p : a.prime_divisors_of_product()) {
    std::vector<int> nu;
    for (int i = 0; i < a.k(); ++i) nu.push_back(valuation(a.abs(static_cast<std::size_t>(i)), p));
    result *= local_numerator(p, nu) / local_denominator(p, a.k());
    check_digits(result);
  }
  return result;
}

double to_double(const RationalValue& q) { return q.convert_to<double>(); }

std::uint64_t kappa(const CoefficientVector& a) {
  require(a.gcd() == 1, ErrorKind::precondition, "kappa: requires gcd(a_1, ..., a_k) = 1");
  unsigned __int128 result = 1;
  for (std::uint64_t p : a.prime_divisors_of_product()) {
    std::vector<int> nu;
    for (int i = 0; i < a.k(); ++i) nu.push_back(valuation(a.abs(static_cast<std::size_t>(i)), p));
    std::sort(nu.begin(), nu.end());
    for (int e = 0; e < nu[1]; ++e) {
      result *= p;
      require(result <= std::numeric_limits<std::uint64_t>::max(), ErrorKind::overflow, "kappa overflows 64 bits");
    }
  }
  return static_cast<std::uint64_t>(result);
}

RhoBounds rho_bounds(const CoefficientVector& a) {
  require(a.k() >= 3, ErrorKind::precondition, "rho bounds need k >= 3");
  const std::uint64_t kap = kappa(a);
  const FactoredInteger f = factorize(kap);
  const RationalValue r = rho(a);
  const int k = a.k();
  RhoBounds b;
  b.rho = to_double(r);
  b.upper = divisor_count(f);
  b.lower = zeta(static_cast<double>(k)) / zeta(static_cast<double>(k - 1)) *
            static_cast<double>(euler_phi(f)) / static_cast<double>(kap) * static_cast<double>(b.upper);
  b.holds = b.lower <= b.rho * (1.0 + 1e-12) && r <= RationalValue(b.upper);
  b.upper_extended = static_cast<double>(b.upper);
  for (std::uint64_t p : a.prime_divisors_of_product())
    if (kap % p != 0) b.upper_extended *= 1.0 + 1.0 / static_cast<double>(p);
  b.holds_extended = b.lower <= b.rho * (1.0 + 1e-12) && b.rho <= b.upper_extended * (1.0 + 1e-12);
  return b;
}

bool rho_bounds_check(const CoefficientVector& a) { return rho_bounds(a).holds; }

double leading_constant(const CoefficientVector& a) {
  const int k = a.k();
  require(k >= 3, ErrorKind::precondition, "leading constant needs k >= 3");
  if (!a.mixed_signs()) return 0.0;
  const double kd = k;
  const double r = a.r_plus();
  double k_fact = 1.0;
  for (int i = 2; i <= k; ++i) k_fact *= i;
  const double combinatorial = k_fact / std::pow(kd, kd + 1.0);
  const double arithmetic = to_double(rho(a)) * std::exp(-a.log_product_abs() / kd);
  const double zeta_ratio = zeta(kd - 1.0) / zeta(kd);
  const double gamma_part =
      std::pow(gamma(1.0 / kd), kd) / (gamma(r / kd) * gamma(1.0 - r / kd));
  return arithmetic * combinatorial * zeta_ratio * gamma_part;
}

SingularSeries singular_series(const CoefficientVector& a, std::uint64_t L) {
  const int k = a.k();
  require(k >= 3, ErrorKind::precondition, "singular series needs k >= 3");
  require(L >= 1, ErrorKind::precondition, "singular series needs L >= 1");
  const SieveTable sieve = build_sieve(L);
  std::vector<double> terms(L);
  parallel_for(L, [&](std::size_t idx) {
    const std::uint64_t l = idx + 1;
    double g = 1.0;
    for (int i = 0; i < k; ++i) g *= static_cast<double>(std::gcd(a.abs(static_cast<std::size_t>(i)), l));
    terms[idx] = g * static_cast<double>(sieve.phi(l)) * std::pow(static_cast<double>(l), -k);
  }, 4096);
  const double zk = zeta(static_cast<double>(k));
  const double norm = 0.5 / (zk * zk);
  const double sum = pairwise_sum(terms);

  SingularSeries out;
  out.truncated.value = sum * norm;
  out.truncated.cutoff = L;
  out.truncated.terms_used = L;
  // prod (a_i, l) <= prod |a_i| and phi(l) <= l, then sum_{l > L} l^{1-k} <= L^{2-k}/(k-2).
  const double prod_abs = std::exp(a.log_product_abs());
  const double tail = prod_abs * std::pow(static_cast<double>(L), 2.0 - k) / (k - 2.0);
  const double rounding = 8.0 * std::numeric_limits<double>::epsilon() * (std::log2(static_cast<double>(L)) + k + 8.0) * sum;
  out.truncated.tail_bound = (tail + rounding) * norm;
  out.closed_form = singular_series_closed_form(a);
  return out;
}

double singular_series_closed_form(const CoefficientVector& a) {
  const int k = a.k();
  require(k >= 3, ErrorKind::precondition, "singular series needs k >= 3");
  const double zk = zeta(static_cast<double>(k));
  return to_double(rho(a)) * zeta(k - 1.0) / (2.0 * zk * zk * zk);
}

}  // namespace divcorr
