#include <doctest.h>

#include <cmath>
#include <random>

#include "divcorr/errors.hpp"
#include "divcorr/estermann.hpp"
#include "divcorr/special.hpp"

using namespace divcorr;

TEST_SUITE("estermann") {
  TEST_CASE("trivial character") {
    const TruncatedValue v = estermann_direct({0.0, 0.0, 3.0, 0, 1}, 1'000'000);
    const double z3 = zeta(3.0);
    CHECK(std::abs(v.value - z3 * z3) <= v.tail_bound);
    CHECK(std::abs(v.value.real() - 1.444940798) < 1e-8);
    // shifted: zeta(s + alpha) zeta(s + beta)
    const Complex al(0.3, 0.1), be(-0.2, 0.4), s(2.5, 1.0);
    const TruncatedValue w = estermann_direct({al, be, s, 0, 1}, 1'000'000);
    CHECK(std::abs(w.value - zeta(s + al) * zeta(s + be)) <= w.tail_bound);
  }

  TEST_CASE("h/l = 1/2 against the parity split") {
    // sum d(n)(-1)^n n^-s = zeta(s)^2 (1 - 2 (1 - 2^-s)^2)
    for (double s : {2.0, 3.0}) {
      const TruncatedValue v = estermann_direct({0.0, 0.0, s, 1, 2}, 1'000'000);
      const double z = zeta(s), q = 1 - std::exp2(-s);
      CHECK(std::abs(v.value - z * z * (1 - 2 * q * q)) <= v.tail_bound);
    }
  }

  TEST_CASE("direct sum preconditions") {
    CHECK_THROWS_AS(estermann_direct({0.0, 0.0, 3.0, 2, 4}, 100), Error);  // gcd(h, l) != 1
    try {
      estermann_direct({0.0, 0.0, 1.0, 1, 3}, 100);
      FAIL("expected a domain error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::domain);
    }
  }

  TEST_CASE("chi factor") {
    CHECK(std::abs(chi_factor(-1, 0.5, 0.0, 0.0).value) == 0.0);
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    for (int i = 0; i < 50; ++i) {
      const Complex s(0.3 + u(rng), 4 * u(rng)), al(u(rng), u(rng)), be(u(rng), u(rng));
      for (int sign : {1, -1}) {
        const Complex want = 2.0 * std::pow(Complex(2 * kPi), 2.0 * s - 2.0 + al + be) * gamma(1.0 - s - al) *
                             gamma(1.0 - s - be) * std::cos(kPi / 2 * ((s + al) - double(sign) * (s + be)));
        const ChiFactor c = chi_factor(sign, s, al, be);
        CHECK(c.sign == sign);
        CHECK(std::abs(c.value - want) <= 1e-11 * std::max(1.0, std::abs(want)));
      }
    }
    CHECK_THROWS_AS(chi_factor(2, 0.5, 0.0, 0.0), Error);
  }

  TEST_CASE("reduced sum for l = 1 is zeta squared") {
    const TruncatedValue v = estermann_reduced_sum(3.0, 1, 1'000'000);
    CHECK(std::abs(v.value - zeta(3.0) * zeta(3.0)) <= v.tail_bound);
    // l = 2: the single h = 1 term
    const TruncatedValue w = estermann_reduced_sum(3.0, 2, 1'000'000);
    const TruncatedValue d = estermann_direct({0.0, 0.0, 3.0, 1, 2}, 1'000'000);
    CHECK(std::abs(w.value - d.value) <= w.tail_bound + d.tail_bound);
  }

  TEST_CASE("averaged identity") {
    const IdentityResidual a = averaged_identity_residual(2.2, 3.1, 2000);
    CHECK(a.holds());
    CHECK(a.bound <= 1e-4);
    const IdentityResidual b = averaged_identity_residual(3.0, 4.0, 5000);
    CHECK(b.holds());
    CHECK(b.residual <= 1e-6);
    const IdentityResidual c = averaged_identity_residual(2.2, 3.1, 1);
    CHECK(c.holds());
    CHECK(c.bound > 0.01);
  }

  TEST_CASE("Ramanujan formula") {
    for (double s : {2.0, 3.0, 4.0})
      for (std::int64_t m : {1, 2, 12, 97, 100}) {
        const IdentityResidual r = ramanujan_formula_residual(s, m, 2000);
        CHECK(r.holds());
      }
    CHECK(ramanujan_formula_residual(3.0, 12, 10000).bound < ramanujan_formula_residual(3.0, 12, 100).bound);
  }

  TEST_CASE("functional equation probe reports the literal reading") {
    const FunctionalEquationProbe f = functional_equation_probe({0.1, 0.2, Complex(2.5, 0.0), 1, 3}, 100000);
    CHECK(std::isfinite(f.residual));
    CHECK(f.lhs_abs > 0);
  }
}
