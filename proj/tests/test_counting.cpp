#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "divcorr/counting.hpp"
#include "divcorr/errors.hpp"

using namespace divcorr;

namespace {

std::uint64_t gcd3(std::uint64_t a, std::uint64_t b, std::uint64_t c) { return std::gcd(a, std::gcd(b, c)); }

// Literal count for k = 3: every x and y in the full box, then the sign
// classes are divided out (4 = {+-x} x {+-y}).
std::uint64_t brute_count3(const CoefficientVector& a, double B) {
  const std::int64_t P = std::int64_t(height_cutoff(B, 3));
  std::uint64_t n = 0;
  for (std::int64_t x1 = -P; x1 <= P; ++x1)
    for (std::int64_t x2 = -P; x2 <= P; ++x2)
      for (std::int64_t x3 = -P; x3 <= P; ++x3) {
        if (!x1 || !x2 || !x3 || gcd3(std::llabs(x1), std::llabs(x2), std::llabs(x3)) != 1) continue;
        const std::int64_t hx = std::max({std::llabs(x1), std::llabs(x2), std::llabs(x3)});
        const std::int64_t Py = P / hx;
        for (std::int64_t y1 = -Py; y1 <= Py; ++y1)
          for (std::int64_t y2 = -Py; y2 <= Py; ++y2)
            for (std::int64_t y3 = -Py; y3 <= Py; ++y3) {
              if (!y1 || !y2 || !y3 || gcd3(std::llabs(y1), std::llabs(y2), std::llabs(y3)) != 1) continue;
              if (a[0] * x1 * y1 + a[1] * x2 * y2 + a[2] * x3 * y3 == 0) ++n;
            }
      }
  return n / 4;
}

}  // namespace

TEST_SUITE("counting") {
  TEST_CASE("height cutoff") {
    CHECK(height_cutoff(1.0, 3) == 0);
    CHECK(height_cutoff(100.0, 3) == 9);
    CHECK(height_cutoff(101.0, 3) == 10);
    CHECK(height_cutoff(1000.0, 4) == 9);
  }

  TEST_CASE("tiny heights") {
    CHECK(count_points({-1, 1, 1}, 1.0).count == 0);
    CHECK(count_points({-1, 1, 1}, 4.0).count == 0);  // x and y in {+-1}^3 need a.(x*y) = 0: impossible for odd sum
  }

  TEST_CASE("fast count equals the six-fold brute force") {
    for (const CoefficientVector& a : {CoefficientVector{-1, 1, 1}, CoefficientVector{-1, 1, 2}, CoefficientVector{-2, 1, 1}})
      for (double B : {10.0, 50.0, 150.0}) CHECK(count_points(a, B).count == brute_count3(a, B));
  }

  TEST_CASE("fast count equals the oracle") {
    for (const CoefficientVector& a : {CoefficientVector{-1, 1, 1}, CoefficientVector{-1, 1, 2}, CoefficientVector{-2, 1, 1},
                                       CoefficientVector{-3, 2, 5}, CoefficientVector{1, 1, -1, -1}})
      for (double B : {30.0, 300.0, 2000.0}) CHECK(count_points(a, B).count == count_points_oracle(a, B).count);
  }

  TEST_CASE("grid count equals single counts") {
    const std::vector<double> grid{64, 200, 1000, 5000};
    const auto res = count_points_grid({-1, 1, 1}, grid);
    REQUIRE(res.size() == grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(res[i].count == count_points({-1, 1, 1}, grid[i]).count);
    for (std::size_t i = 1; i < res.size(); ++i) CHECK(res[i].count >= res[i - 1].count);
  }

  TEST_CASE("known count") { CHECK(count_points({-1, 1, 1}, 10000.0).count == 354912); }

  TEST_CASE("count is invariant under permutation and negation") {
    const CoefficientVector a{-3, 1, 2};
    const std::vector<std::size_t> order{1, 2, 0};
    const auto n = count_points(a, 3000.0).count;
    CHECK(count_points(a.permuted(order), 3000.0).count == n);
    CHECK(count_points(a.negated(), 3000.0).count == n);
  }

  TEST_CASE("saturated volume") {
    const VolumeEstimate v = sigma_volume({-5, 1, 1}, 1, 1 << 14);
    CHECK(std::abs(v.value - 16.0) <= 2 * v.standard_error + 1e-12);
    const VolumeEstimate q = sigma_volume_quadrature({-5, 1, 1}, 1);
    CHECK(q.value == doctest::Approx(16.0).epsilon(1e-6));
  }

  TEST_CASE("volume symmetry and quadrature agreement") {
    const VolumeEstimate s2 = sigma_volume({-1, 1, 2}, 2, 1 << 16);
    const VolumeEstimate q2 = sigma_volume_quadrature({-1, 1, 2}, 2);
    CHECK(std::abs(s2.value - q2.value) <= 3 * std::hypot(s2.standard_error, q2.standard_error));
    // sigma_i depends on a only through |a| and which index is removed
    const VolumeEstimate a = sigma_volume_quadrature({-1, 1, 2}, 1);
    const VolumeEstimate b = sigma_volume_quadrature({1, -1, 2}, 2);
    CHECK(a.value == doctest::Approx(b.value).epsilon(1e-6));
    CHECK_THROWS_AS(sigma_volume({-1, 1, 1}, 4, 100), Error);
  }

  TEST_CASE("count fit recovers its own model") {
    std::vector<std::pair<double, double>> samples;
    for (int e = 10; e <= 22; ++e) {
      const double B = std::exp2(e);
      samples.emplace_back(B, 0.3 * B * std::log(B) + 1.1 * B);
    }
    const FitResult f = fit_count_asymptotic(samples);
    CHECK(f.coefficients[0] == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(f.coefficients[1] == doctest::Approx(1.1).epsilon(1e-9));
  }

  TEST_CASE("count fit with two points is rank deficient") {
    const std::vector<std::pair<double, double>> samples{{1024.0, 5000.0}, {2048.0, 11000.0}};
    try {
      fit_count_asymptotic(samples);
      FAIL("expected a rank error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::rank);
    }
  }

  TEST_CASE("prediction composition") {
    const Prediction p = leading_term_prediction({-1, 1, 1}, 1 << 16);
    REQUIRE(p.sigma.size() == 3);
    double sum = 0.0;
    for (const auto& v : p.sigma) sum += v.value;
    CHECK(p.value == doctest::Approx(p.singular_series * sum / 2).epsilon(1e-14));
    CHECK(p.singular_series == doctest::Approx(0.4735255517).epsilon(1e-6));
  }
}
