#include "divcorr/solutions.hpp"

#include <algorithm>
#include <numeric>

#include "divcorr/errors.hpp"

namespace divcorr {

namespace {

// inverse of x modulo m (m >= 1, gcd(x, m) = 1)
std::int64_t inverse_mod(std::int64_t x, std::int64_t m) {
  if (m == 1) return 0;
  __int128 t = 0, new_t = 1, r = m, new_r = ((x % m) + m) % m;
  while (new_r != 0) {
    const __int128 q = r / new_r;
    t = t - q * new_t;
    std::swap(t, new_t);
    r = r - q * new_r;
    std::swap(r, new_r);
  }
  if (t < 0) t += m;
  return static_cast<std::int64_t>(t);
}

}  // namespace

SolutionEnumerator::SolutionEnumerator(const CoefficientVector& a, Region region, std::uint64_t limit)
    : a_(a.entries()), k_(a.k()), region_(region), limit_(limit) {
  require(k_ <= kMaxK, ErrorKind::precondition, "solution enumeration supports k <= 12");
  require(a.mixed_signs(), ErrorKind::precondition, "no positive solutions: coefficients share a sign");
  require(limit >= 1, ErrorKind::precondition, "enumeration limit must be >= 1");

  for (int i = 1; i < k_; ++i)
    if (a.abs(i) > a.abs(j_)) j_ = i;
  for (int i = 0; i < k_; ++i)
    if (i != j_) free_.push_back(i);

  std::uint64_t b = limit;
  double worst = 1.0;
  if (region == Region::hyperbolic) {
    // The largest entry n_m satisfies n_m <= (S_m/|a_m|) n_i for some other i,
    // hence n_m^2 |a_m| / S_m <= n_m n_i <= limit.
    const double total = static_cast<double>(a.sum_abs());
    worst = 0.0;
    for (int m = 0; m < k_; ++m) {
      const double am = static_cast<double>(a.abs(m));
      worst = std::max(worst, (total - am) / am);
    }
    const double root = std::sqrt(static_cast<double>(limit) * worst) + 2.0;
    if (root < static_cast<double>(limit)) b = static_cast<std::uint64_t>(root);
  }
  bound_.assign(k_, b);
  max_entry_ = b;

  const int l = free_.back();
  const std::int64_t aj = static_cast<std::int64_t>(a.abs(j_));
  g_ = static_cast<std::int64_t>(std::gcd(a.abs(l), a.abs(j_)));
  step_ = aj / g_;
  inv_ = inverse_mod(a_[l] / g_, step_);

  const double L = static_cast<double>(limit);
  if (region == Region::box) {
    work_ = std::pow(L, k_ - 2) * (L / static_cast<double>(step_) + 1.0);
  } else {
    const double lg = 1.0 + std::log(L);
    work_ = k_ == 2 ? static_cast<double>(b)
                    : 2.0 * std::pow(L, (k_ - 1.0) / k_) * std::pow(lg, k_ - 2.0) * (1.0 + worst);
  }
}

bool SolutionEnumerator::feasible(int depth, i128 partial, i128 room) const {
  // 0 must lie in partial + sum over the remaining indices of a_i [1, u_i].
  i128 lo = partial, hi = partial;
  auto widen = [&](int i) {
    const i128 u = std::min<i128>(bound_[i], room);
    if (u < 1) return false;
    if (a_[i] > 0) {
      lo += a_[i];
      hi += a_[i] * u;
    } else {
      lo += a_[i] * u;
      hi += a_[i];
    }
    return true;
  };
  for (std::size_t d = static_cast<std::size_t>(depth); d < free_.size(); ++d)
    if (!widen(free_[d])) return false;
  if (!widen(j_)) return false;
  return lo <= 0 && 0 <= hi;
}

}  // namespace divcorr
