#pragma once

// Enumeration of positive solutions of a_1 n_1 + ... + a_k n_k = 0 inside a
// box (max n_i <= limit) or a hyperbolic region (n_1 ... n_k <= limit).
//
// The variable with the largest |a_j| is eliminated. The others are looped
// over, the first one outermost so callers can split work on it; the last one
// runs through an arithmetic progression fixed by the congruence mod |a_j|.

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "divcorr/constants.hpp"

namespace divcorr {

enum class Region { box, hyperbolic };

class SolutionEnumerator {
 public:
  static constexpr int kMaxK = 12;
  using Tuple = std::array<std::uint64_t, kMaxK>;

  SolutionEnumerator(const CoefficientVector& a, Region region, std::uint64_t limit);

  // Values taken by the outermost free variable are 1..outer_extent().
  std::uint64_t outer_extent() const noexcept { return bound_[free_[0]]; }
  // Largest value any n_i can take; a table of weights up to here suffices.
  std::uint64_t max_entry() const noexcept { return max_entry_; }
  // Rough number of visited tuples, for budget checks.
  double work_estimate() const noexcept { return work_; }
  int eliminated() const noexcept { return j_; }

  // Calls visit(tuple) for every solution with n[outer] = v; entries 0..k-1 of
  // the tuple are in the original coefficient order. Deterministic order.
  template <class Visit>
  void for_outer(std::uint64_t v, Visit&& visit) const;

 private:
  using i128 = __int128;

  template <class Visit>
  void descend(int depth, Tuple& n, i128 partial, i128 product, Visit& visit) const;
  template <class Visit>
  void last(Tuple& n, i128 partial, i128 product, Visit& visit) const;
  bool feasible(int depth, i128 partial, i128 room) const;

  static i128 floor_div(i128 a, i128 b) {
    i128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
  }
  static i128 ceil_div(i128 a, i128 b) { return -floor_div(-a, b); }

  std::vector<std::int64_t> a_;
  int k_ = 0;
  Region region_;
  i128 limit_ = 0;
  int j_ = 0;                      // eliminated index
  std::vector<int> free_;          // looped indices, outermost first
  std::vector<std::uint64_t> bound_;  // per-index a priori bound
  std::uint64_t max_entry_ = 0;
  // congruence data for the last free variable l: a_l n_l = -partial (mod |a_j|)
  std::int64_t step_ = 1;          // |a_j| / g
  std::int64_t g_ = 1;             // gcd(|a_l|, |a_j|)
  std::int64_t inv_ = 0;           // (a_l / g)^{-1} mod step
  double work_ = 0.0;
};

template <class Visit>
void SolutionEnumerator::for_outer(std::uint64_t v, Visit&& visit) const {
  if (v < 1 || v > outer_extent()) return;
  Tuple n{};
  const int o = free_[0];
  n[o] = v;
  const i128 partial = static_cast<i128>(a_[o]) * v;
  const i128 product = v;
  if (region_ == Region::hyperbolic && product > limit_) return;
  if (k_ == 2) {
    // n_j is forced directly
    const i128 num = -partial;
    if (num % a_[j_] != 0) return;
    const i128 nj = num / a_[j_];
    if (nj < 1 || nj > static_cast<i128>(bound_[j_])) return;
    if (region_ == Region::hyperbolic && product * nj > limit_) return;
    n[j_] = static_cast<std::uint64_t>(nj);
    visit(static_cast<const Tuple&>(n));
    return;
  }
  if (!feasible(1, partial, region_ == Region::hyperbolic ? limit_ / product : limit_)) return;
  descend(1, n, partial, product, visit);
}

template <class Visit>
void SolutionEnumerator::descend(int depth, Tuple& n, i128 partial, i128 product, Visit& visit) const {
  if (depth == static_cast<int>(free_.size()) - 1) {
    last(n, partial, product, visit);
    return;
  }
  const int i = free_[depth];
  i128 hi = bound_[i];
  if (region_ == Region::hyperbolic) hi = std::min(hi, limit_ / product);
  for (i128 v = 1; v <= hi; ++v) {
    const i128 p2 = partial + static_cast<i128>(a_[i]) * v;
    const i128 prod2 = product * v;
    const i128 room = region_ == Region::hyperbolic ? limit_ / prod2 : limit_;
    if (!feasible(depth + 1, p2, room)) continue;
    n[i] = static_cast<std::uint64_t>(v);
    descend(depth + 1, n, p2, prod2, visit);
  }
}

template <class Visit>
void SolutionEnumerator::last(Tuple& n, i128 partial, i128 product, Visit& visit) const {
  const int l = free_.back();
  const i128 al = a_[l];
  const i128 aj = a_[j_];
  if (partial % g_ != 0) return;
  // residue of n_l modulo step_
  i128 r = (-(partial / g_)) % step_;
  if (r < 0) r += step_;
  r = (r * inv_) % step_;

  // n_j = -(partial + a_l n_l) / a_j in [1, uj]
  const i128 room = region_ == Region::hyperbolic ? limit_ / product : limit_;
  const i128 uj = std::min<i128>(bound_[j_], room);
  const i128 lo_t = aj > 0 ? aj : aj * uj;  // a_j n_j ranges over [lo_t, hi_t]
  const i128 hi_t = aj > 0 ? aj * uj : aj;
  i128 lo, hi;
  if (al > 0) {
    lo = ceil_div(-partial - hi_t, al);
    hi = floor_div(-partial - lo_t, al);
  } else {
    lo = ceil_div(-partial - lo_t, al);
    hi = floor_div(-partial - hi_t, al);
  }
  lo = std::max<i128>(lo, 1);
  hi = std::min<i128>(hi, std::min<i128>(bound_[l], room));
  if (lo > hi) return;

  auto run = [&](i128 from, i128 to) {
    if (from > to) return;
    // first element >= from congruent to r
    i128 v = from + ((r - from % step_) % step_ + step_) % step_;
    for (; v <= to; v += step_) {
      const i128 nj = -(partial + al * v) / aj;
      if (region_ == Region::hyperbolic && v * nj > room) continue;
      n[l] = static_cast<std::uint64_t>(v);
      n[j_] = static_cast<std::uint64_t>(nj);
      visit(static_cast<const Tuple&>(n));
    }
  };

  if (region_ == Region::box) {
    run(lo, hi);
    return;
  }
  // v * n_j(v) <= room is quadratic in v: c v^2 + d0 v - room <= 0 with
  // c = -a_l / a_j and d0 = -partial / a_j. Candidates near the roots are
  // checked exactly, so the floating roots only need to be close.
  const double c = -static_cast<double>(al) / static_cast<double>(aj);
  const double d0 = -static_cast<double>(partial) / static_cast<double>(aj);
  const double R = static_cast<double>(room);
  const double disc = d0 * d0 + 4.0 * c * R;
  if (c > 0.0) {
    const double r2 = (-d0 + std::sqrt(std::max(disc, 0.0))) / (2.0 * c);
    run(lo, std::min<i128>(hi, static_cast<i128>(std::floor(r2)) + 2));
  } else if (disc <= 0.0) {
    run(lo, hi);
  } else {
    const double sq = std::sqrt(disc);
    const double r1 = (-d0 + sq) / (2.0 * c);  // smaller root (c < 0)
    const double r2 = (-d0 - sq) / (2.0 * c);
    const i128 cut1 = std::min<i128>(hi, static_cast<i128>(std::floor(std::max(r1, 0.0))) + 2);
    run(lo, cut1);
    const i128 cut2 = std::max<i128>(cut1 + 1, static_cast<i128>(std::ceil(std::min(r2, 4.0e30))) - 2);
    run(std::max(lo, cut2), hi);
  }
}

}  // namespace divcorr
