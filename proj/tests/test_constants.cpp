#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "divcorr/arith.hpp"
#include "divcorr/config.hpp"
#include "divcorr/constants.hpp"
#include "divcorr/errors.hpp"
#include "divcorr/special.hpp"

using namespace divcorr;

namespace {

// Local factor of rho at p, summed in long double: (sum_m (1-1/p) p^m prod_i p^{-max(0, m - v_i)} - (1-1/p)... )
// built literally from the defining double sum over m <= 60.
long double local_numerator_oracle(const std::vector<int>& v, long double p) {
  long double acc = 0.0L;
  for (int m = 1; m <= 60; ++m) {
    long double term = (1.0L - 1.0L / p) * std::pow(p, (long double)m);
    for (int vi : v) term *= std::pow(p, -(long double)std::max(0, m - vi));
    acc += term;
  }
  return 1.0L + acc;
}

CoefficientVector random_vector(std::mt19937_64& rng, int k, int bound, bool primitive) {
  std::uniform_int_distribution<int> u(-bound, bound);
  for (;;) {
    std::vector<std::int64_t> a(k);
    for (auto& x : a)
      do x = u(rng);
      while (x == 0);
    std::uint64_t g = 0;
    bool pos = false, neg = false;
    for (auto x : a) {
      g = std::gcd(g, std::uint64_t(std::llabs(x)));
      (x > 0 ? pos : neg) = true;
    }
    if (!(pos && neg)) continue;
    if (primitive && g != 1) continue;
    return CoefficientVector(a);
  }
}

}  // namespace

TEST_SUITE("constants") {
  TEST_CASE("coefficient vector") {
    const CoefficientVector a{-2, 4, 6};
    CHECK(a.k() == 3);
    CHECK(a.gcd() == 2);
    CHECK(a.r_plus() == 2);
    CHECK(a.mixed_signs());
    CHECK(a.str() == "-2,4,6");
    CHECK(parse_coefficients("-2,4,6") == a);
    CHECK_THROWS_AS(CoefficientVector({0, 1, 1}), Error);
    CHECK_THROWS_AS(CoefficientVector({1}), Error);
    CHECK_THROWS_AS(parse_coefficients("1,x"), Error);
  }

  TEST_CASE("rho examples") {
    CHECK(rho({-1, 1, 1}) == 1);
    CHECK(rho({-1, 1, 2}) == RationalValue(8, 7));
    CHECK(rho({-2, 2, 2}) == 2);
  }

  TEST_CASE("rho against the literal double-sum oracle") {
    // (-1,1,2): only p = 2 contributes, valuations (0,0,1), k = 3
    const long double p = 2.0L;
    const long double num = local_numerator_oracle({0, 0, 1}, p);
    // the rho normalisation divides each local factor by its value at a = (1,...,1)
    const long double den = local_numerator_oracle({0, 0, 0}, p);
    CHECK(std::abs(double(num / den) - 8.0 / 7.0) < 1e-12);
    CHECK(std::abs(to_double(rho({-1, 1, 2})) - double(num / den)) < 1e-12);

    // a product of two primes
    const CoefficientVector a{-3, 4, 5};
    long double want = 1.0L;
    for (long double q : {2.0L, 3.0L, 5.0L}) {
      std::vector<int> v;
      for (auto x : a.entries()) v.push_back(valuation(std::uint64_t(std::llabs(x)), std::uint64_t(q)));
      want *= local_numerator_oracle(v, q) / local_numerator_oracle({0, 0, 0}, q);
    }
    CHECK(std::abs(to_double(rho(a)) - double(want)) < 1e-12);
  }

  TEST_CASE("rho homogeneity") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
      const CoefficientVector a = random_vector(rng, 3 + i % 3, 30, false);
      const RationalValue r = rho(a);
      for (std::int64_t q : {2, 3, 5}) CHECK(rho(a.scaled(q)) == q * r);
    }
  }

  TEST_CASE("rho digit cap") {
    const Config saved = config();
    Config tight = saved;
    tight.max_rational_digits = 3;
    set_config(tight);
    bool overflowed = false;
    try {
      rho({-6, 10, 15, 7});
    } catch (const Error& e) {
      overflowed = e.kind() == ErrorKind::overflow;
    }
    set_config(saved);
    CHECK(overflowed);
  }

  TEST_CASE("kappa") {
    CHECK(kappa({-1, 1, 1}) == 1);
    CHECK(kappa({-1, 2, 2}) == 2);
    CHECK(kappa({-1, 4, 6}) == 2);
    CHECK(kappa({-9, 2, 27}) == 9);
    CHECK_THROWS_AS(kappa({-2, 2, 4}), Error);  // gcd 2
  }

  TEST_CASE("rho bounds") {
    const RhoBounds b = rho_bounds({-1, 1, 1});
    CHECK(b.lower == doctest::Approx(zeta(3.0) / zeta(2.0)));
    CHECK(b.upper == 1);
    CHECK(b.holds);
    const RhoBounds c = rho_bounds({-1, 2, 2});
    CHECK(c.lower == doctest::Approx(zeta(3.0) / zeta(2.0) * 0.5 * 2.0));
    CHECK(c.upper == 2);
    CHECK(c.holds);
    // a prime dividing exactly one entry pushes rho above d(kappa)
    const RhoBounds d = rho_bounds({-1, 1, 2});
    CHECK(d.upper == 1);
    CHECK(d.rho == doctest::Approx(8.0 / 7.0));
    CHECK_FALSE(d.holds);
    CHECK(d.holds_extended);
    CHECK(d.upper_extended == doctest::Approx(1.5));
    std::mt19937_64 rng(13);
    for (int i = 0; i < 200; ++i) {
      const RhoBounds r = rho_bounds(random_vector(rng, 3 + i % 3, 20, true));
      CHECK(r.holds_extended);
      CHECK(r.lower <= r.rho * (1 + 1e-12));
    }
  }

  TEST_CASE("leading constant") {
    CHECK(leading_constant({-1, 1, 1}) == doctest::Approx(0.537228).epsilon(1e-6));
    CHECK(leading_constant({1, 1, 1}) == 0.0);
    CHECK(leading_constant({-2, 2, 2}) == doctest::Approx(leading_constant({-1, 1, 1})).epsilon(1e-13));
  }

  TEST_CASE("leading constant invariances") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 30; ++i) {
      const CoefficientVector a = random_vector(rng, 3 + i % 3, 12, false);
      const double c = leading_constant(a);
      std::vector<std::size_t> order(a.k());
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      CHECK(std::abs(leading_constant(a.permuted(order)) - c) < 1e-12 * std::max(1.0, c));
      CHECK(std::abs(leading_constant(a.negated()) - c) < 1e-12 * std::max(1.0, c));
    }
  }

  TEST_CASE("singular series") {
    const double z2 = zeta(2.0), z3 = zeta(3.0);
    const SingularSeries one = singular_series({-1, 1, 1}, 1);
    CHECK(one.truncated.value.real() == doctest::Approx(1.0 / (2 * z3 * z3)).epsilon(1e-14));
    const SingularSeries s = singular_series({-1, 1, 1}, 100000);
    CHECK(s.closed_form == doctest::Approx(z2 / (2 * z3 * z3 * z3)).epsilon(1e-13));
    CHECK(std::abs(s.truncated.value.real() - s.closed_form) <= s.truncated.tail_bound);
    const SingularSeries t = singular_series({-1, 1, 2}, 100000);
    CHECK(t.closed_form == doctest::Approx(8.0 / 7.0 * z2 / (2 * z3 * z3 * z3)).epsilon(1e-13));
    CHECK(std::abs(t.truncated.value.real() - t.closed_form) <= t.truncated.tail_bound);
  }

  TEST_CASE("singular series for k = 4") {
    const SingularSeries s = singular_series({-1, 1, 1, 1}, 20000);
    CHECK(std::abs(s.truncated.value.real() - s.closed_form) <= s.truncated.tail_bound);
    CHECK(s.truncated.tail_bound < 1e-6);
  }
}
