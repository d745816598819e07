#include "divcorr/counting.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <atomic>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numeric>

#include "divcorr/config.hpp"
#include "divcorr/errors.hpp"
#include "divcorr/parallel.hpp"

namespace divcorr {

namespace {

constexpr int kMaxK = 12;
using Point = std::array<std::int64_t, kMaxK>;
using Clock = std::chrono::steady_clock;

std::int64_t iabs(std::int64_t v) { return v < 0 ? -v : v; }

// binary gcd on non-negative values
std::uint64_t bgcd(std::uint64_t u, std::uint64_t v) {
  if (u == 0) return v;
  if (v == 0) return u;
  const int shift = std::countr_zero(u | v);
  u >>= std::countr_zero(u);
  do {
    v >>= std::countr_zero(v);
    if (u > v) std::swap(u, v);
    v -= u;
  } while (v != 0);
  return u << shift;
}

std::int64_t inverse_mod(std::int64_t x, std::int64_t m) {
  if (m == 1) return 0;
  __int128 t = 0, nt = 1, r = m, nr = ((x % m) + m) % m;
  while (nr != 0) {
    const __int128 q = r / nr;
    t -= q * nt;
    std::swap(t, nt);
    r -= q * nr;
    std::swap(r, nr);
  }
  return static_cast<std::int64_t>(t < 0 ? t + m : t);
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

void check_instance(const CoefficientVector& a, double B) {
  require(a.k() >= 3 && a.k() <= kMaxK, ErrorKind::precondition, "count_points: needs 3 <= k <= 12");
  require(a.mixed_signs(), ErrorKind::precondition, "count_points: coefficients share a sign");
  require(B >= 1.0 && std::isfinite(B), ErrorKind::precondition, "count_points: B must be >= 1");
}

// Canonical (x_1 > 0) primitive x with non-zero entries and max |x_i| <= limit.
std::vector<Point> canonical_points(int k, std::int64_t limit) {
  std::vector<Point> out;
  if (limit < 1) return out;
  Point x{};
  for (int i = 0; i < k; ++i) x[i] = -limit;
  x[0] = 1;
  for (;;) {
    bool nonzero = true;
    std::uint64_t g = 0;
    for (int i = 0; i < k; ++i) {
      if (x[i] == 0) nonzero = false;
      g = bgcd(g, static_cast<std::uint64_t>(iabs(x[i])));
    }
    if (nonzero && g == 1) out.push_back(x);
    int i = k - 1;
    while (i >= 0) {
      if (x[i] < limit) {
        ++x[i];
        break;
      }
      x[i] = i == 0 ? 1 : -limit;
      --i;
    }
    if (i < 0) break;
  }
  return out;
}

std::int64_t max_abs(const Point& x, int k) {
  std::int64_t m = 0;
  for (int i = 0; i < k; ++i) m = std::max(m, iabs(x[i]));
  return m;
}

// For one x, walks every y class with m <= max|y| <= Y and sum c_i y_i = 0,
// c_i = a_i x_i, solving for the index with the largest |c_i|.
class YWalker {
 public:
  YWalker(const std::vector<std::int64_t>& c, std::int64_t m, std::int64_t Y) : c_(c), k_(int(c.size())), m_(m), Y_(Y) {
    for (int i = 1; i < k_; ++i)
      if (iabs(c_[i]) > iabs(c_[j_])) j_ = i;
    for (int i = 0; i < k_; ++i)
      if (i != j_) free_.push_back(i);
    const int l = free_.back();
    const std::int64_t cj = iabs(c_[j_]);
    g_ = std::gcd(iabs(c_[l]), cj);
    step_ = cj / g_;
    inv_ = inverse_mod(c_[l] / g_, step_);
    // remaining reach of |sum| for the pruning test
    reach_.assign(free_.size() + 1, 0);
    reach_.back() = cj * Y_;
    for (int d = int(free_.size()) - 1; d >= 0; --d) reach_[d] = reach_[d + 1] + iabs(c_[free_[d]]) * Y_;
  }

  template <class Emit>
  std::uint64_t run(Emit&& emit) {
    visited_ = 0;
    Point y{};
    // y -> -y: keep the representative with the first free coordinate positive
    const int o = free_[0];
    for (std::int64_t v = 1; v <= Y_; ++v) {
      y[o] = v;
      descend(1, y, c_[o] * v, v, emit);
    }
    return visited_;
  }

 private:
  template <class Emit>
  void descend(std::size_t depth, Point& y, std::int64_t partial, std::int64_t mx, Emit& emit) {
    if (iabs(partial) > reach_[depth]) return;
    if (depth + 1 == free_.size()) {
      last(y, partial, mx, emit);
      return;
    }
    const int i = free_[depth];
    for (std::int64_t v = -Y_; v <= Y_; ++v) {
      if (v == 0) continue;
      y[i] = v;
      descend(depth + 1, y, partial + c_[i] * v, std::max(mx, iabs(v)), emit);
    }
  }

  template <class Emit>
  void last(Point& y, std::int64_t partial, std::int64_t mx, Emit& emit) {
    const int l = free_.back();
    if (partial % g_ != 0) return;
    std::int64_t r = (-(partial / g_)) % step_;
    if (r < 0) r += step_;
    r = static_cast<std::int64_t>((static_cast<__int128>(r) * inv_) % step_);
    // y_j = -(partial + c_l y_l) / c_j in [-Y, Y]
    const std::int64_t cl = c_[l], cj = c_[j_];
    const std::int64_t t_lo = -partial - iabs(cj) * Y_, t_hi = -partial + iabs(cj) * Y_;  // c_l y_l range
    std::int64_t lo = cl > 0 ? ceil_div(t_lo, cl) : ceil_div(t_hi, cl);
    std::int64_t hi = cl > 0 ? floor_div(t_hi, cl) : floor_div(t_lo, cl);
    lo = std::max(lo, -Y_);
    hi = std::min(hi, Y_);
    if (lo > hi) return;
    std::int64_t v = lo + ((r - lo % step_) % step_ + step_) % step_;
    std::uint64_t g0 = 0;
    for (std::size_t d = 0; d + 1 < free_.size(); ++d) g0 = bgcd(g0, static_cast<std::uint64_t>(iabs(y[free_[d]])));
    for (; v <= hi; v += step_) {
      ++visited_;
      if (v == 0) continue;
      const std::int64_t yj = -(partial + cl * v) / cj;
      if (yj == 0) continue;
      const std::int64_t top = std::max({mx, iabs(v), iabs(yj)});
      if (top < m_) continue;
      if (bgcd(bgcd(g0, static_cast<std::uint64_t>(iabs(v))), static_cast<std::uint64_t>(iabs(yj))) != 1) continue;
      emit(top);
    }
  }

  const std::vector<std::int64_t>& c_;
  int k_;
  std::int64_t m_, Y_;
  int j_ = 0;
  std::vector<int> free_;
  std::int64_t g_ = 1, step_ = 1, inv_ = 0;
  std::vector<std::int64_t> reach_;
  std::uint64_t visited_ = 0;
};

}  // namespace

std::uint64_t height_cutoff(double B, int k) {
  if (B <= 1.0) return 0;
  auto fits = [&](std::uint64_t P) {
    long double v = 1.0L;
    for (int i = 0; i < k - 1; ++i) v *= static_cast<long double>(P);
    return v < static_cast<long double>(B);
  };
  auto P = static_cast<std::uint64_t>(std::pow(B, 1.0 / (k - 1)));
  while (P > 0 && !fits(P)) --P;
  while (fits(P + 1)) ++P;
  return P;
}

std::vector<PointCountResult> count_points_grid(const CoefficientVector& a, std::span<const double> grid) {
  require(!grid.empty(), ErrorKind::precondition, "count_points: empty grid");
  const double Bmax = *std::max_element(grid.begin(), grid.end());
  for (double B : grid) check_instance(a, B);
  const int k = a.k();
  const auto start = Clock::now();
  const std::uint64_t H = height_cutoff(Bmax, k);
  const double work = std::ldexp(1.0, k) * std::pow(static_cast<double>(H), k - 1) * (1.0 + std::log(H + 1.0));
  require(work <= config().max_pairs, ErrorKind::budget, "count_points: work estimate exceeds max_pairs");

  // Swapping x and y preserves the equation and the height, so only pairs with
  // max|x| <= max|y| are walked; those with strict inequality count twice.
  const auto xlimit = static_cast<std::int64_t>(std::sqrt(static_cast<double>(H)));
  const std::vector<Point> xs = canonical_points(k, xlimit);
  std::vector<std::uint64_t> hist(H + 1, 0);
  std::atomic<std::uint64_t> visited{0};
  parallel_for(xs.size(), [&](std::size_t idx) {
    const Point& x = xs[idx];
    const std::int64_t m = max_abs(x, k);
    const auto Y = static_cast<std::int64_t>(H) / m;
    if (Y < m) return;
    std::vector<std::int64_t> c(k);
    for (int i = 0; i < k; ++i) c[i] = a[i] * x[i];
    YWalker walker(c, m, Y);
    const std::uint64_t v = walker.run([&](std::int64_t top) {
      std::atomic_ref<std::uint64_t>(hist[static_cast<std::size_t>(m * top)])
          .fetch_add(top > m ? 2 : 1, std::memory_order_relaxed);
    });
    visited.fetch_add(v, std::memory_order_relaxed);
  }, 16);
  std::partial_sum(hist.begin(), hist.end(), hist.begin());
  const auto elapsed = Clock::now() - start;

  std::vector<PointCountResult> out;
  for (double B : grid) {
    PointCountResult r;
    r.B = B;
    r.count = hist[height_cutoff(B, k)];
    r.enumerated_pairs = visited.load();
    r.elapsed = elapsed;
    out.push_back(r);
  }
  return out;
}

PointCountResult count_points(const CoefficientVector& a, double B) {
  const double grid[] = {B};
  return count_points_grid(a, grid).front();
}

PointCountResult count_points_oracle(const CoefficientVector& a, double B) {
  check_instance(a, B);
  const int k = a.k();
  const auto start = Clock::now();
  const auto H = static_cast<std::int64_t>(height_cutoff(B, k));
  PointCountResult out;
  out.B = B;
  for (const Point& x : canonical_points(k, H)) {
    const std::int64_t m = max_abs(x, k);
    const std::int64_t Y = H / m;
    // y_1 > 0 fixes the sign of y; y_2..y_{k-1} run over the box
    Point y{};
    y[0] = 1;
    for (int i = 1; i < k - 1; ++i) y[i] = -Y;
    if (Y < 1) continue;
    for (;;) {
      ++out.enumerated_pairs;
      bool nonzero = true;
      std::int64_t rest = 0;
      for (int i = 0; i < k - 1; ++i) {
        nonzero = nonzero && y[i] != 0;
        rest += a[i] * x[i] * y[i];
      }
      const std::int64_t ck = a[k - 1] * x[k - 1];
      if (nonzero && rest % ck == 0) {
        y[k - 1] = -rest / ck;
        std::uint64_t g = 0;
        for (int i = 0; i < k; ++i) g = std::gcd(g, static_cast<std::uint64_t>(iabs(y[i])));
        long double h = 1.0L;
        for (int i = 0; i < k - 1; ++i) h *= static_cast<long double>(m * max_abs(y, k));
        if (y[k - 1] != 0 && g == 1 && h < static_cast<long double>(B)) ++out.count;
      }
      int i = k - 2;
      while (i >= 0) {
        if (y[i] < Y) {
          ++y[i];
          break;
        }
        y[i] = i == 0 ? 1 : -Y;
        --i;
      }
      if (i < 0) break;
    }
  }
  out.elapsed = Clock::now() - start;
  return out;
}

VolumeEstimate sigma_volume(const CoefficientVector& a, int i, std::uint64_t samples) {
  const int k = a.k();
  require(i >= 1 && i <= k, ErrorKind::precondition, "sigma_volume: index out of range");
  require(samples >= 1024, ErrorKind::precondition, "sigma_volume: needs at least 2^10 samples");
  const int dim = 2 * k - 2;
  static constexpr std::array<int, 2 * kMaxK> primes = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                                                         41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};
  std::vector<double> coef;
  for (int j = 0; j < k; ++j)
    if (j != i - 1) coef.push_back(static_cast<double>(a[j]));
  const double band = static_cast<double>(a.abs(i - 1));
  const std::uint64_t offset = config().halton_offset;

  auto radical_inverse = [](std::uint64_t n, int base) {
    double inv = 1.0 / base, f = inv, r = 0.0;
    while (n > 0) {
      r += f * static_cast<double>(n % base);
      n /= base;
      f *= inv;
    }
    return r;
  };
  // hits are integers, so chunked counting is order-free
  const std::uint64_t half = samples / 2;
  constexpr std::size_t chunk = 4096;
  const std::size_t chunks = (samples + chunk - 1) / chunk;
  std::vector<std::uint64_t> hits_first(chunks), hits_second(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    std::uint64_t h1 = 0, h2 = 0;
    const std::uint64_t from = c * chunk, to = std::min<std::uint64_t>(samples, from + chunk);
    for (std::uint64_t n = from; n < to; ++n) {
      const std::uint64_t index = n + 1 + offset;  // index 0 is the origin
      double s = 0.0;
      for (int d = 0; d < dim; d += 2) {
        const double x = 2.0 * radical_inverse(index, primes[d]) - 1.0;
        const double y = 2.0 * radical_inverse(index, primes[d + 1]) - 1.0;
        s += coef[d / 2] * x * y;
      }
      if (std::abs(s) < band) (n < half ? h1 : h2) += 1;
    }
    hits_first[c] = h1;
    hits_second[c] = h2;
  }, 1);
  const double h1 = static_cast<double>(std::accumulate(hits_first.begin(), hits_first.end(), std::uint64_t{0}));
  const double h2 = static_cast<double>(std::accumulate(hits_second.begin(), hits_second.end(), std::uint64_t{0}));
  const double box = std::ldexp(1.0, dim);
  const double m1 = box * h1 / static_cast<double>(half);
  const double m2 = box * h2 / static_cast<double>(samples - half);
  VolumeEstimate out;
  out.value = box * (h1 + h2) / static_cast<double>(samples);
  out.standard_error = std::abs(m1 - m2) / 2.0;
  out.samples = samples;
  out.method = VolumeEstimate::Method::qmc;
  return out;
}

VolumeEstimate sigma_volume_quadrature(const CoefficientVector& a, int i, double tolerance) {
  require(a.k() == 3, ErrorKind::precondition, "nested quadrature is implemented for k = 3 only");
  require(i >= 1 && i <= 3, ErrorKind::precondition, "sigma_volume: index out of range");
  require(tolerance > 0.0, ErrorKind::precondition, "sigma_volume: tolerance must be positive");
  int p = -1, q = -1;
  for (int j = 0; j < 3; ++j)
    if (j != i - 1) (p < 0 ? p : q) = j;
  const double A = static_cast<double>(a.abs(i - 1));
  const double ap = static_cast<double>(a.abs(p));
  const double aq = static_cast<double>(a.abs(q));
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  const double inner_tol = tolerance * 1e-3;

  // integrate f over [lo, hi] split at the given kinks
  auto piecewise = [](auto&& f, double lo, double hi, std::vector<double> kinks, double tol, double* err) {
    kinks.push_back(lo);
    kinks.push_back(hi);
    std::sort(kinks.begin(), kinks.end());
    double total = 0.0, e_total = 0.0;
    for (std::size_t t = 0; t + 1 < kinks.size(); ++t) {
      const double u = std::max(lo, kinks[t]), v = std::min(hi, kinks[t + 1]);
      if (!(v > u)) continue;
      double e = 0.0;
      total += GK::integrate(f, u, v, 15, tol, &e);
      e_total += e * std::abs(v - u);
    }
    if (err) *err = e_total;
    return total;
  };

  // Measure of y in [-1, 1] with |c + b y| < A, b = aq |x_q|.
  auto inner = [&](double c, double xq) {
    const double b = aq * xq;
    if (b <= 0.0) return std::abs(c) < A ? 2.0 : 0.0;
    const double len = std::min(b, A - c) - std::max(-b, -A - c);
    return std::max(0.0, len) / b;
  };
  // integral over x_q in [-1, 1]; even in x_q and in c
  auto middle = [&](double c) {
    std::vector<double> kinks = {std::abs(A - c) / aq, std::abs(A + c) / aq};
    return 2.0 * piecewise([&](double xq) { return inner(c, xq); }, 0.0, 1.0, kinks, inner_tol, nullptr);
  };
  // c = a_p x_p y_p; the region is symmetric under each sign flip
  const std::vector<double> ckinks = {A, std::abs(A - aq), A + aq};
  auto over_y = [&](double xp) {
    std::vector<double> kinks;
    for (double c : ckinks)
      if (xp > 0.0) kinks.push_back(c / (ap * xp));
    return piecewise([&](double yp) { return middle(ap * xp * yp); }, 0.0, 1.0, kinks, inner_tol, nullptr);
  };
  std::vector<double> xkinks;
  for (double c : ckinks) xkinks.push_back(c / ap);
  double err = 0.0;
  const double value = 4.0 * piecewise(over_y, 0.0, 1.0, xkinks, tolerance * 1e-2, &err);

  VolumeEstimate out;
  out.value = value;
  out.standard_error = std::max(4.0 * err, tolerance);
  out.samples = 0;
  out.method = VolumeEstimate::Method::nested_quadrature;
  return out;
}

Prediction leading_term_prediction(const CoefficientVector& a, std::uint64_t samples) {
  require(a.k() >= 3, ErrorKind::precondition, "leading_term_prediction: needs k >= 3");
  require(a.mixed_signs(), ErrorKind::precondition, "leading_term_prediction: coefficients share a sign");
  Prediction out;
  out.singular_series = singular_series_closed_form(a);
  double total = 0.0, var = 0.0;
  for (int i = 1; i <= a.k(); ++i) {
    out.sigma.push_back(sigma_volume(a, i, samples));
    total += out.sigma.back().value;
    var += out.sigma.back().standard_error * out.sigma.back().standard_error;
  }
  out.value = out.singular_series * total / (a.k() - 1);
  out.error = out.singular_series * std::sqrt(var) / (a.k() - 1) + 1e-12 * out.value;
  return out;
}

FitResult fit_count_asymptotic(std::span<const std::pair<double, double>> samples) {
  require(samples.size() >= 6, ErrorKind::rank, "fit_count_asymptotic: needs at least 6 grid points");
  const auto n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd b(n);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto [B, N] = samples[r];
    require(B > 1.0 && std::isfinite(B) && std::isfinite(N), ErrorKind::precondition,
            "fit_count_asymptotic: grid values must be finite and > 1");
    // N / B = C log B + f
    A(r, 0) = std::log(B);
    A(r, 1) = 1.0;
    b(r) = N / B;
    lo = std::min(lo, B);
    hi = std::max(hi, B);
  }
  FitResult out;
  out.model = "N(B) = C B log B + f B";
  const Eigen::VectorXd scale = A.colwise().norm().transpose();
  const Eigen::MatrixXd As = A * scale.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(As, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  out.condition_estimate = sv(1) > 0.0 ? sv(0) / sv(1) : std::numeric_limits<double>::infinity();
  require(out.condition_estimate < 1.0e12, ErrorKind::rank, "fit_count_asymptotic: design matrix is rank deficient");
  require(hi >= 256.0 * lo, ErrorKind::rank, "fit_count_asymptotic: grid must span a factor 2^8");
  const Eigen::VectorXd coef = svd.solve(b).cwiseQuotient(scale);
  out.coefficients = {coef(0), coef(1)};
  out.residual_norm = (A * coef - b).norm();
  out.sample_range = {lo, hi};
  return out;
}

FitResult fit_count_asymptotic(const CoefficientVector& a, std::span<const double> grid,
                               std::span<const PointCountResult> counts) {
  require(grid.size() == counts.size(), ErrorKind::precondition, "fit_count_asymptotic: grid and counts differ in length");
  (void)a;
  std::vector<std::pair<double, double>> samples;
  for (std::size_t t = 0; t < grid.size(); ++t) samples.emplace_back(grid[t], static_cast<double>(counts[t].count));
  return fit_count_asymptotic(samples);
}

}  // namespace divcorr
