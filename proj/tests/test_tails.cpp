#include <doctest.h>

#include <cmath>
#include <vector>

#include "divcorr/arith.hpp"
#include "divcorr/parallel.hpp"
#include "divcorr/special.hpp"
#include "divcorr/tails.hpp"

using namespace divcorr;

TEST_SUITE("tails") {
  TEST_CASE("rankin tail majorizes the true tail") {
    const SieveTable t = build_sieve(2'000'000);
    for (double sigma : {1.6, 2.0, 3.0}) {
      // true tail beyond T: zeta(sigma)^2 - partial sum
      const double full = zeta(sigma) * zeta(sigma);
      for (std::uint64_t T : {100ULL, 10000ULL}) {
        long double part = 0.0L;
        for (std::uint64_t n = T; n >= 1; --n) part += t.d(n) / std::pow((long double)n, (long double)sigma);
        const double tail = full - double(part);
        CHECK(rankin_tail(double(T), sigma, 2) >= tail);
        CHECK(RankinBound(sigma, 2)(double(T)) >= tail);
      }
    }
    CHECK(std::isinf(rankin_tail(100.0, 1.0, 2)));
  }

  TEST_CASE("divisor bound constant") {
    const SieveTable t = build_sieve(1'000'000);
    for (double delta : {0.1, 0.25, 0.5}) {
      const double c = std::exp(log_divisor_bound_constant(delta));
      for (std::uint64_t n = 1; n <= 1'000'000; ++n) REQUIRE(t.d(n) <= c * std::pow(double(n), delta) * (1 + 1e-12));
    }
    CHECK(std::exp(log_divisor_bound_constant(0.5)) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  }

  TEST_CASE("power tail") {
    double s = 0.0;
    for (int m = 1'000'000; m >= 10; --m) s += std::pow(double(m), -2.5);
    CHECK(power_tail(10.0, 2.5) >= s);
  }

  TEST_CASE("pairwise sum is deterministic across thread counts") {
    std::vector<double> v(100000);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(double(i)) / (1.0 + double(i));
    const double a = pairwise_sum(v);
    std::vector<double> w(v.size());
    parallel_for(v.size(), [&](std::size_t i) { w[i] = std::sin(double(i)) / (1.0 + double(i)); });
    CHECK(pairwise_sum(w) == a);
    long double exact = 0.0L;
    for (double x : v) exact += x;
    CHECK(std::abs(a - double(exact)) <= rounding_allowance(double(v.size()), 20.0));
  }
}
