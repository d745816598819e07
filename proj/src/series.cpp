#include "divcorr/series.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "divcorr/arith.hpp"
#include "divcorr/config.hpp"
#include "divcorr/errors.hpp"
#include "divcorr/parallel.hpp"
#include "divcorr/solutions.hpp"
#include "divcorr/special.hpp"
#include "divcorr/tails.hpp"

namespace divcorr {

namespace {

void check_work(double work, const char* what) {
  require(work <= config().max_terms, ErrorKind::budget,
          std::string(what) + ": enumeration estimate exceeds max_terms");
}

// Tail of a k >= 3 correlation series restricted to max n_i <= T, with
// |weight_i(n)| <= d(n) n^{-sigma_i}. For the index m carrying the maximum,
// n_m <= (S_m/|a_m|) M where M is the largest of the other entries, so
// M > T |a_m| / S_m. With d(n) <= C_delta n^delta and tau_i = sigma_i - delta,
// summing the others under max = M (attained at index l) gives
//   C_delta^k sum_m sum_{l != m} prod_{i != m,l} c_i sum_{M >= M0} M^{-e},
//   e = tau_m + tau_l - sum_{i != m,l} max(0, 1 - tau_i).
double correlation_tail(const CoefficientVector& a, std::span<const double> sigma, double T) {
  const int k = a.k();
  const double total = static_cast<double>(a.sum_abs());
  double best = std::numeric_limits<double>::infinity();
  for (double delta = 0.05; delta <= 0.5 + 1e-9; delta += 0.01) {
    const double logC = log_divisor_bound_constant(delta);
    if (!std::isfinite(logC)) continue;
    std::vector<double> tau(k), c(k), g(k);
    bool ok = true;
    for (int i = 0; i < k; ++i) {
      tau[i] = sigma[i] - delta;
      if (tau[i] <= 0.0 || std::abs(tau[i] - 1.0) < 1e-6) ok = false;
      c[i] = tau[i] < 1.0 ? 1.0 / (1.0 - tau[i]) : tau[i] / (tau[i] - 1.0);
      g[i] = tau[i] < 1.0 ? 1.0 - tau[i] : 0.0;
    }
    if (!ok) continue;
    double sum = 0.0;
    for (int m = 0; m < k; ++m) {
      const double am = static_cast<double>(a.abs(m));
      const double M0 = std::floor(T * am / (total - am)) + 1.0;
      for (int l = 0; l < k; ++l) {
        if (l == m) continue;
        double e = tau[m] + tau[l], coef = 1.0;
        for (int i = 0; i < k; ++i) {
          if (i == m || i == l) continue;
          e -= g[i];
          coef *= c[i];
        }
        sum += coef * power_tail(M0, e);
      }
    }
    best = std::min(best, std::exp(k * logC) * sum);
  }
  return best;
}

// k = 2: solutions are n_1 = b_2 t, n_2 = b_1 t with b_i = |a_i| / gcd, so
// |term| <= d(b_1) d(b_2) b_2^{-sigma_1} b_1^{-sigma_2} d(t)^2 t^{-(sigma_1 + sigma_2)}.
double binary_tail(const CoefficientVector& a, std::span<const double> sigma, double T) {
  const std::uint64_t g = a.gcd();
  const std::uint64_t b1 = a.abs(0) / g, b2 = a.abs(1) / g;
  const double t0 = std::floor(T / static_cast<double>(std::max(b1, b2)));
  const double front = static_cast<double>(divisor_count(factorize(b1)) * divisor_count(factorize(b2))) *
                       std::pow(static_cast<double>(b2), -sigma[0]) * std::pow(static_cast<double>(b1), -sigma[1]);
  return front * rankin_tail(t0, sigma[0] + sigma[1], 4);
}

// weight(n) = tau_{alpha,beta}(n) n^{-e} for n <= limit, or d(n) n^{-e} when plain.
std::vector<Complex> weight_table(const SieveTable& sieve, std::uint64_t limit, Complex e, bool plain,
                                  Complex alpha, Complex beta) {
  std::vector<Complex> w(limit + 1);
  parallel_for(limit, [&](std::size_t idx) {
    const std::uint64_t n = idx + 1;
    const Complex scale = std::exp(-e * std::log(static_cast<double>(n)));
    w[n] = plain ? static_cast<double>(sieve.d(n)) * scale : tau_shifted(sieve.factorize(n), alpha, beta) * scale;
  }, 4096);
  return w;
}

}  // namespace

std::vector<std::pair<std::uint64_t, std::uint64_t>> h_coefficients(const CoefficientVector& a,
                                                                     std::uint64_t Nmax) {
  require(Nmax >= 1, ErrorKind::precondition, "h_coefficients: Nmax must be >= 1");
  const SolutionEnumerator en(a, Region::hyperbolic, Nmax);
  check_work(en.work_estimate(), "h_coefficients");
  const SieveTable sieve = build_sieve(std::max<std::uint64_t>(en.max_entry(), 1));
  const int k = a.k();
  std::vector<std::uint64_t> h(Nmax + 1, 0);
  parallel_for(en.outer_extent(), [&](std::size_t idx) {
    en.for_outer(idx + 1, [&](const SolutionEnumerator::Tuple& n) {
      std::uint64_t prod = 1, w = 1;
      for (int i = 0; i < k; ++i) {
        prod *= n[i];
        w *= sieve.d(n[i]);
      }
      std::atomic_ref<std::uint64_t>(h[prod]).fetch_add(w, std::memory_order_relaxed);
    });
  }, 1);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  out.reserve(Nmax);
  for (std::uint64_t n = 1; n <= Nmax; ++n) out.emplace_back(n, h[n]);
  return out;
}

TruncatedValue partial_sum_A(const CoefficientVector& a, Complex s, std::span<const Complex> alpha,
                             std::span<const Complex> beta, std::uint64_t T, Normalization norm) {
  const int k = a.k();
  require(T >= 1, ErrorKind::precondition, "partial_sum_A: T must be >= 1");
  require(a.mixed_signs(), ErrorKind::precondition, "partial_sum_A: coefficients share a sign");
  const bool plain = norm == Normalization::plain;
  if (plain) {
    require(alpha.empty() && beta.empty(), ErrorKind::precondition, "partial_sum_A: shifts need the shifted normalization");
  } else {
    require(alpha.size() == static_cast<std::size_t>(k) && beta.size() == static_cast<std::size_t>(k),
            ErrorKind::precondition, "partial_sum_A: need k shifts alpha and beta");
    const double cap = 1.0 / (2.0 * (k - 1)) + 1e-15;
    for (int i = 0; i < k; ++i)
      require(std::abs(alpha[i].real()) <= cap && std::abs(beta[i].real()) <= cap, ErrorKind::precondition,
              "partial_sum_A: |Re alpha_i|, |Re beta_i| must be <= 1/(2(k-1))");
  }

  // |tau_{alpha,beta}(n)| <= d(n) n^{-min(Re alpha, Re beta)}
  const Complex e = plain ? s : 0.5 + s;
  std::vector<double> sigma(k, e.real());
  if (!plain)
    for (int i = 0; i < k; ++i) sigma[i] += std::min(alpha[i].real(), beta[i].real());
  const double excess = std::accumulate(sigma.begin(), sigma.end(), 0.0) - (k - 1);
  require(excess > k * kZetaDelta, ErrorKind::domain, "partial_sum_A: s outside the region of absolute convergence");

  const SolutionEnumerator en(a, Region::box, T);
  check_work(en.work_estimate(), "partial_sum_A");
  const SieveTable sieve = build_sieve(T);

  // one table per distinct shift pair
  std::vector<std::vector<Complex>> tables;
  std::vector<const Complex*> w(k);
  {
    std::vector<std::pair<Complex, Complex>> keys;
    for (int i = 0; i < k; ++i) {
      const std::pair<Complex, Complex> key = plain ? std::pair<Complex, Complex>{} : std::pair{alpha[i], beta[i]};
      auto it = std::find(keys.begin(), keys.end(), key);
      if (it == keys.end()) {
        keys.push_back(key);
        tables.push_back(weight_table(sieve, T, e, plain, key.first, key.second));
        it = keys.end() - 1;
      }
    }
    for (int i = 0; i < k; ++i) {
      const std::pair<Complex, Complex> key = plain ? std::pair<Complex, Complex>{} : std::pair{alpha[i], beta[i]};
      w[i] = tables[std::find(keys.begin(), keys.end(), key) - keys.begin()].data();
    }
  }

  const std::uint64_t E = en.outer_extent();
  std::vector<Complex> acc(E);
  std::vector<double> mag(E);
  std::vector<std::uint64_t> count(E);
  parallel_for(E, [&](std::size_t idx) {
    Complex sum = 0.0;
    double abs_sum = 0.0;
    std::uint64_t c = 0;
    en.for_outer(idx + 1, [&](const SolutionEnumerator::Tuple& n) {
      Complex t = w[0][n[0]];
      for (int i = 1; i < k; ++i) t *= w[i][n[i]];
      sum += t;
      abs_sum += std::abs(t);
      ++c;
    });
    acc[idx] = sum;
    mag[idx] = abs_sum;
    count[idx] = c;
  }, 1);

  TruncatedValue out;
  out.value = pairwise_sum(acc);
  out.cutoff = T;
  out.terms_used = std::accumulate(count.begin(), count.end(), std::uint64_t{0});
  const double tail = k == 2 ? binary_tail(a, sigma, static_cast<double>(T))
                             : correlation_tail(a, sigma, static_cast<double>(T));
  require(std::isfinite(tail), ErrorKind::domain, "partial_sum_A: s too close to the abscissa for a certified tail");
  out.tail_bound = tail + rounding_allowance(static_cast<double>(out.terms_used), pairwise_sum(mag));
  return out;
}

TruncatedValue partial_sum_A(const CoefficientVector& a, Complex s, std::uint64_t T) {
  return partial_sum_A(a, s, {}, {}, T, Normalization::plain);
}

Complex closed_form_k2(Complex s) {
  require(s.real() > 0.5 + kZetaDelta, ErrorKind::domain, "closed_form_k2: needs Re s > 1/2 + delta");
  const Complex z2 = zeta(2.0 * s);
  return z2 * z2 * z2 * z2 / zeta(4.0 * s);
}

double SmoothWeight::operator()(double x) const {
  if (!(std::abs(x) < 1.0)) return 0.0;
  return normalization * std::exp(1.0 - 1.0 / (1.0 - x * x));
}

Complex SmoothWeight::mellin(Complex s) const {
  require(s.real() > 0.0, ErrorKind::domain, "mellin transform needs Re s > 0");
  boost::math::quadrature::tanh_sinh<double> rule;
  auto part = [&](bool imag) {
    return rule.integrate([&](double x) {
      if (x <= 0.0 || x >= 1.0) return 0.0;
      const Complex v = (*this)(x) * std::exp((s - 1.0) * std::log(x));
      return imag ? v.imag() : v.real();
    }, 0.0, 1.0);
  };
  return {part(false), part(true)};
}

double smoothed_sum(const CoefficientVector& a, const SmoothWeight& phi, double X) {
  require(X >= 1.0, ErrorKind::precondition, "smoothed_sum: X must be >= 1");
  require(a.mixed_signs(), ErrorKind::precondition, "smoothed_sum: coefficients share a sign");
  const int k = a.k();
  const double Xk = std::pow(X, k);
  require(Xk < 9.0e18, ErrorKind::budget, "smoothed_sum: X^k exceeds 64-bit products");
  // Phi vanishes for n_1...n_k >= X^k.
  const auto limit = static_cast<std::uint64_t>(std::floor(Xk));
  const SolutionEnumerator en(a, Region::hyperbolic, limit);
  check_work(en.work_estimate(), "smoothed_sum");
  const SieveTable sieve = build_sieve(en.max_entry());

  const std::uint64_t E = en.outer_extent();
  std::vector<double> acc(E);
  parallel_for(E, [&](std::size_t idx) {
    double sum = 0.0;
    en.for_outer(idx + 1, [&](const SolutionEnumerator::Tuple& n) {
      double prod = 1.0, w = 1.0;
      for (int i = 0; i < k; ++i) {
        prod *= static_cast<double>(n[i]);
        w *= sieve.d(n[i]);
      }
      sum += w * phi(prod / Xk);
    });
    acc[idx] = sum;
  }, 1);
  return pairwise_sum(acc);
}

FitResult fit_main_terms(std::span<const std::pair<double, double>> samples, int k, bool lower_order) {
  require(k >= 2, ErrorKind::precondition, "fit_main_terms: k must be >= 2");
  std::vector<std::pair<double, int>> columns;  // (power of X relative to X^{k-1}, power of log X)
  for (int j = 0; j <= k; ++j) columns.emplace_back(0.0, j);
  std::ostringstream model;
  model << "sum_{j<=" << k << "} c_j (log X)^j X^" << k - 1;
  if (lower_order) {
    for (int i = (k + 3) / 2; i < k; ++i) {
      for (int j = 0; j <= i; ++j) columns.emplace_back(1.0 - static_cast<double>(k) / i, j);
      model << " + P_" << i << "(log X) X^(" << k << "-" << k << "/" << i << ")";
    }
  }
  const auto n = static_cast<Eigen::Index>(samples.size());
  const auto p = static_cast<Eigen::Index>(columns.size());
  require(samples.size() >= 2 * (static_cast<std::size_t>(k) + 1) && n >= p, ErrorKind::rank,
          "fit_main_terms: too few samples to determine the model");

  // Rows are divided by X^{k-1}, i.e. weighted least squares with weights X^{-(k-1)}.
  Eigen::MatrixXd A(n, p);
  Eigen::VectorXd b(n);
  double xmin = std::numeric_limits<double>::infinity(), xmax = 0.0;
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto [X, S] = samples[r];
    require(X > 1.0 && std::isfinite(X) && std::isfinite(S), ErrorKind::precondition,
            "fit_main_terms: samples need finite X > 1");
    xmin = std::min(xmin, X);
    xmax = std::max(xmax, X);
    const double L = std::log(X);
    for (Eigen::Index c = 0; c < p; ++c)
      A(r, c) = std::pow(L, columns[c].second) * std::pow(X, columns[c].first);
    b(r) = S / std::pow(X, k - 1);
  }
  FitResult out;
  out.model = model.str();
  // Column equilibration before the SVD keeps the condition estimate meaningful.
  Eigen::VectorXd scale = A.colwise().norm().transpose();
  for (Eigen::Index c = 0; c < p; ++c)
    if (scale(c) == 0.0) scale(c) = 1.0;
  const Eigen::MatrixXd As = A * scale.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(As, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  out.condition_estimate = sv(p - 1) > 0.0 ? sv(0) / sv(p - 1) : std::numeric_limits<double>::infinity();
  require(out.condition_estimate < 1.0e12, ErrorKind::rank, "fit_main_terms: design matrix is rank deficient");
  require(xmax >= 16.0 * xmin, ErrorKind::precondition, "fit_main_terms: samples must span a factor 2^4 in X");
  const Eigen::VectorXd coef = svd.solve(b).cwiseQuotient(scale);
  out.coefficients.assign(coef.data(), coef.data() + p);
  out.residual_norm = (A * coef - b).norm();
  out.sample_range = {xmin, xmax};
  return out;
}

IdentityResidual quadruple_zeta_residual(Complex s, Complex alpha, Complex beta, std::uint64_t T) {
  require(T >= 1, ErrorKind::precondition, "quadruple_zeta_residual: T must be >= 1");
  // |sigma_alpha(n)| <= d(n) n^{max(0, Re alpha)}
  const double sigma = s.real() - std::max(0.0, alpha.real()) - std::max(0.0, beta.real());
  require(sigma > 1.0 + 2.0 * kZetaDelta, ErrorKind::domain, "quadruple_zeta_residual: series does not converge absolutely");
  const Complex rhs = zeta(s) * zeta(s - alpha) * zeta(s - beta) * zeta(s - alpha - beta) / zeta(2.0 * s - alpha - beta);
  const SieveTable sieve = build_sieve(T);
  std::vector<Complex> terms(T);
  std::vector<double> mag(T);
  parallel_for(T, [&](std::size_t idx) {
    const std::uint64_t n = idx + 1;
    const FactoredInteger f = sieve.factorize(n);
    terms[idx] = sigma_power(f, alpha) * sigma_power(f, beta) * std::exp(-s * std::log(static_cast<double>(n)));
    mag[idx] = std::abs(terms[idx]);
  }, 4096);
  const Complex lhs = pairwise_sum(terms);
  IdentityResidual out;
  out.residual = std::abs(lhs - rhs);
  out.bound = rankin_tail(static_cast<double>(T), sigma, 4) + rounding_allowance(static_cast<double>(T), pairwise_sum(mag)) +
              1e-11 * std::abs(rhs);
  return out;
}

}  // namespace divcorr
