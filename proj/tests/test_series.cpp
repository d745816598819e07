#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "divcorr/arith.hpp"
#include "divcorr/errors.hpp"
#include "divcorr/series.hpp"
#include "divcorr/special.hpp"

using namespace divcorr;

namespace {

// h_a(n) by a triple loop over n_1, n_2, n_3 <= Nmax.
std::map<std::uint64_t, std::uint64_t> h_oracle3(const CoefficientVector& a, std::uint64_t Nmax) {
  const SieveTable t = build_sieve(Nmax);
  std::map<std::uint64_t, std::uint64_t> h;
  for (std::uint64_t x = 1; x <= Nmax; ++x)
    for (std::uint64_t y = 1; x * y <= Nmax; ++y)
      for (std::uint64_t z = 1; x * y * z <= Nmax; ++z)
        if (a[0] * std::int64_t(x) + a[1] * std::int64_t(y) + a[2] * std::int64_t(z) == 0)
          h[x * y * z] += std::uint64_t(t.d(x)) * t.d(y) * t.d(z);
  return h;
}

// Smoothed sum for (-1,1,1) with n_2 as the outer loop: n_1 = n_2 + n_3.
double smoothed_oracle(double X) {
  const SmoothWeight phi;
  const double lim = X * X * X;
  const SieveTable t = build_sieve(std::uint64_t(lim) + 2);
  double acc = 0.0;
  for (std::uint64_t n2 = 1; double(n2) * n2 < lim; ++n2)
    for (std::uint64_t n3 = 1; double(n2 + n3) * n2 * n3 < lim; ++n3) {
      const std::uint64_t n1 = n2 + n3;
      acc += double(t.d(n1)) * t.d(n2) * t.d(n3) * phi(double(n1) * n2 * n3 / lim);
    }
  return acc;
}

}  // namespace

TEST_SUITE("series") {
  TEST_CASE("h coefficients for k = 2") {
    const auto h = h_coefficients({1, -1}, 100);
    CHECK(h[0] == std::pair<std::uint64_t, std::uint64_t>{1, 1});
    CHECK(h[3].second == 4);  // n = 4: n_1 = n_2 = 2
    CHECK(h[1].second == 0);  // n = 2 is not a square
    CHECK(h[35].second == 16);  // n = 36: d(6)^2
  }

  TEST_CASE("h coefficients against the triple loop") {
    for (const CoefficientVector& a : {CoefficientVector{-1, 1, 1}, CoefficientVector{-2, 1, 3}, CoefficientVector{1, 1, -2}}) {
      const auto h = h_coefficients(a, 500);
      const auto want = h_oracle3(a, 500);
      for (const auto& [n, v] : h) {
        const auto it = want.find(n);
        CHECK(v == (it == want.end() ? 0 : it->second));
      }
    }
  }

  TEST_CASE("h coefficient symmetries") {
    const CoefficientVector a{-3, 1, 2, 5};
    const auto h = h_coefficients(a, 200);
    const std::vector<std::size_t> order{2, 0, 3, 1};
    CHECK(h_coefficients(a.permuted(order), 200) == h);
    CHECK(h_coefficients(a.negated(), 200) == h);
  }

  TEST_CASE("k = 2 partial sums and the closed form") {
    const double z4 = zeta(4.0), z8 = zeta(8.0);
    CHECK(std::abs(closed_form_k2(2.0) - std::pow(z4, 4) / z8) < 1e-13);
    CHECK(std::abs(closed_form_k2(2.0) - 1.3666608459) < 1e-9);
    CHECK(std::abs(closed_form_k2(1.0) - 6.7645202107) < 1e-9);
    CHECK(std::abs(closed_form_k2(20.0) - 1.0) < 1e-10);
    for (double s : {1.5, 2.0, 3.0}) {
      const TruncatedValue v = partial_sum_A({1, -1}, s, 1'000'000);
      CHECK(std::abs(v.value - closed_form_k2(s)) <= v.tail_bound);
      CHECK(v.tail_bound < 1e-4);
    }
    const Complex s(1.2, 3.0);
    const TruncatedValue v = partial_sum_A({1, -1}, s, 1'000'000);
    CHECK(std::abs(v.value - closed_form_k2(s)) <= v.tail_bound);
  }

  TEST_CASE("ten-term sum at s = 10") {
    const SieveTable t = build_sieve(10);
    long double want = 0.0L;
    for (int n = 10; n >= 1; --n) want += (long double)t.d(n) * t.d(n) / std::pow((long double)n, 20.0L);
    const TruncatedValue v = partial_sum_A({1, -1}, 10.0, 10);
    CHECK(v.value.real() == doctest::Approx(double(want)).epsilon(1e-15));
    CHECK(v.value.real() == doctest::Approx(1.0000038).epsilon(1e-7));
  }

  TEST_CASE("k = 3 partial sums form a Cauchy sequence") {
    double prev = 0.0, prev_bound = 0.0;
    for (std::uint64_t T : {1000ULL, 10000ULL}) {
      const TruncatedValue v = partial_sum_A({-1, 1, 1}, 0.9, T);
      CHECK(v.value.real() > prev);
      if (prev > 0) CHECK(v.value.real() - prev <= prev_bound);
      CHECK(std::isfinite(v.tail_bound));
      prev = v.value.real();
      prev_bound = v.tail_bound;
    }
  }

  TEST_CASE("shifted normalisation") {
    // zero shifts: prod d(n_i) / n_i^{1/2 + s} is the plain sum at s + 1/2
    const std::vector<Complex> zero(3);
    const TruncatedValue a = partial_sum_A({-1, 1, 1}, 1.0, zero, zero, 300, Normalization::shifted);
    const TruncatedValue b = partial_sum_A({-1, 1, 1}, 1.5, 300);
    CHECK(std::abs(a.value - b.value) < 1e-12 * std::abs(b.value));
    // k = 2 with shifts: sum_n sigma-type weights against a literal loop
    const std::vector<Complex> al{Complex(0.1, 0.2), Complex(-0.1, 0.0)}, be{Complex(0.05, 0.0), Complex(0.2, -0.3)};
    const TruncatedValue c = partial_sum_A({1, -1}, Complex(1.1, 0.5), al, be, 2000, Normalization::shifted);
    Complex want = 0.0;
    for (std::uint64_t n = 2000; n >= 1; --n)
      want += tau_shifted(n, al[0], be[0]) * tau_shifted(n, al[1], be[1]) * std::pow(double(n), -2.0 * (0.5 + Complex(1.1, 0.5)));
    CHECK(std::abs(c.value - want) < 1e-12);
    CHECK_THROWS_AS(partial_sum_A({-1, 1, 1}, 1.0, std::vector<Complex>(3, 0.3), zero, 100, Normalization::shifted), Error);
  }

  TEST_CASE("domain errors") {
    try {
      partial_sum_A({-1, 1, 1}, 0.6, 100);
      FAIL("expected a domain error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::domain);
    }
    CHECK_THROWS_AS(partial_sum_A({1, -1}, 0.5, 100), Error);
  }

  TEST_CASE("smoothed sums") {
    const SmoothWeight phi;
    CHECK(phi(0.0) == doctest::Approx(1.0));
    CHECK(phi(1.0) == 0.0);
    CHECK(smoothed_sum({-1, 1, 1}, phi, 1.2) == 0.0);  // X^3 < 2
    CHECK(smoothed_sum({-1, 1, 1}, phi, 10.0) == doctest::Approx(smoothed_oracle(10.0)).epsilon(1e-12));
    CHECK(smoothed_sum({-1, 1, 1}, phi, 25.0) == doctest::Approx(smoothed_oracle(25.0)).epsilon(1e-12));
    CHECK(smoothed_sum({1, 1, -1}, phi, 25.0) == doctest::Approx(smoothed_oracle(25.0)).epsilon(1e-12));
  }

  TEST_CASE("Mellin transform of the bump") {
    const SmoothWeight phi;
    // int_0^1 phi(x) dx by the midpoint rule
    double acc = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) acc += phi((i + 0.5) / n);
    CHECK(std::abs(phi.mellin(1.0) - acc / n) < 1e-9);
  }

  TEST_CASE("main-term fit recovers its own model") {
    const std::vector<double> c{0.7, -1.3, 2.2, 0.45};
    std::vector<std::pair<double, double>> samples;
    for (double e = 6; e <= 12; e += 0.5) {
      const double X = std::exp2(e), L = std::log(X);
      samples.emplace_back(X, (c[0] + c[1] * L + c[2] * L * L + c[3] * L * L * L) * X * X);
    }
    const FitResult f = fit_main_terms(samples, 3);
    REQUIRE(f.coefficients.size() == 4);
    for (int j = 0; j < 4; ++j) CHECK(f.coefficients[j] == doctest::Approx(c[j]).epsilon(1e-8));
  }

  TEST_CASE("main-term fit on smoothed sums is stable across windows") {
    const SmoothWeight phi;
    std::vector<std::pair<double, double>> all;
    for (double e = 6; e <= 11; e += 0.25) all.emplace_back(std::exp2(e), smoothed_sum({-1, 1, 1}, phi, std::exp2(e)));
    const auto fit_window = [&](std::size_t first, std::size_t n) {
      return fit_main_terms(std::span(all).subspan(first, n), 3).coefficients.back();
    };
    const double base = fit_window(0, 17);
    CHECK(base > 0);
    CHECK(std::abs(fit_window(2, 17) / base - 1) < 0.1);
    CHECK(std::abs(fit_window(4, 17) / base - 1) < 0.1);
  }

  TEST_CASE("degenerate samples are rank deficient") {
    std::vector<std::pair<double, double>> samples(10, {100.0, 5.0});
    try {
      fit_main_terms(samples, 3);
      FAIL("expected a rank error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::rank);
    }
  }

  TEST_CASE("quadruple zeta identity") {
    const IdentityResidual r = quadruple_zeta_residual(3.0, -0.4, -0.7, 1'000'000);
    CHECK(r.holds());
    CHECK(r.bound < 1e-6);
    const IdentityResidual c = quadruple_zeta_residual(Complex(3.5, 1.0), Complex(0.2, 0.5), Complex(-0.3, 0.0), 100000);
    CHECK(c.holds());
  }
}

TEST_SUITE("series-long") {
  TEST_CASE("k = 3 partial sum at T = 1e5") {
    const TruncatedValue a = partial_sum_A({-1, 1, 1}, 0.9, 10000);
    const TruncatedValue b = partial_sum_A({-1, 1, 1}, 0.9, 100000);
    CHECK(b.value.real() > a.value.real());
    CHECK(b.value.real() - a.value.real() <= a.tail_bound);
    CHECK(b.tail_bound <= a.tail_bound);
  }
}
