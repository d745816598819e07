#include "divcorr/tails.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <mutex>

#include "divcorr/arith.hpp"
#include "divcorr/special.hpp"

namespace divcorr {

RankinBound::RankinBound(double sigma, int r) : sigma_(sigma) {
  const double lo = 1.0 + 2.0 * kZetaDelta;
  if (sigma <= lo) return;
  const double hi = std::min(sigma, 12.0);
  constexpr int steps = 160;
  for (int i = 0; i <= steps; ++i) {
    // denser near theta = 1, where zeta blows up
    const double u = static_cast<double>(i) / steps;
    theta_.push_back(lo + (hi - lo) * u * u);
    log_zeta_r_.push_back(r * std::log(zeta(theta_.back())));
  }
}

double RankinBound::operator()(double T) const {
  const double logT = std::log(std::max(T, 1.0));
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < theta_.size(); ++i)
    best = std::min(best, std::exp((theta_[i] - sigma_) * logT + log_zeta_r_[i]));
  return best;
}

double rankin_tail(double T, double sigma, int r) { return RankinBound(sigma, r)(T); }

double log_divisor_bound_constant(double delta) {
  if (!(delta > 0.0)) return std::numeric_limits<double>::infinity();
  const double plimit = std::exp2(1.0 / delta);
  if (plimit > 1.0e8) return std::numeric_limits<double>::infinity();
  static std::mutex lock;
  static std::vector<std::uint32_t> primes;
  static double sieved = 0.0;
  std::scoped_lock guard(lock);
  if (sieved < plimit) {
    sieved = std::max(plimit, 1024.0) + 1.0;
    primes = SieveTable(static_cast<std::uint64_t>(sieved)).primes();
  }
  double total = 0.0;
  for (std::uint32_t p : primes) {
    if (p >= plimit) break;
    const double lp = delta * std::log(static_cast<double>(p));
    double best = 0.0;
    for (int a = 1; a < 400; ++a) {
      const double v = std::log(a + 1.0) - a * lp;
      if (v < best - 1.0) break;
      best = std::max(best, v);
    }
    total += best;
  }
  return total;
}

double power_tail(double M0, double e) {
  if (!(e > 1.0)) return std::numeric_limits<double>::infinity();
  M0 = std::max(M0, 1.0);
  return std::pow(M0, -e) + std::pow(M0, 1.0 - e) / (e - 1.0);
}

double rounding_allowance(double n, double abs_sum) {
  return 4.0 * std::numeric_limits<double>::epsilon() * (std::log2(std::max(n, 2.0)) + 4.0) * abs_sum;
}

}  // namespace divcorr
