#include "divcorr/verify.hpp"

#include <algorithm>
#include <complex>
#include <random>

#include "divcorr/constants.hpp"
#include "divcorr/estermann.hpp"
#include "divcorr/series.hpp"
#include "divcorr/special.hpp"

namespace divcorr {

namespace {

std::vector<std::int64_t> random_vector(std::mt19937_64& rng, int k, int bound) {
  std::uniform_int_distribution<int> pick(-bound, bound - 1);
  std::vector<std::int64_t> a;
  while (static_cast<int>(a.size()) < k) {
    int v = pick(rng);
    if (v >= 0) ++v;  // skip 0
    a.push_back(v);
  }
  return a;
}

SuiteEntry tolerance_entry(std::string name, double tol) {
  SuiteEntry e;
  e.name = std::move(name);
  e.bound = tol;
  return e;
}

void finish(SuiteEntry& e) { e.passed = e.cases > 0 && e.residual <= e.bound; }

}  // namespace

std::vector<SuiteEntry> identity_suite(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<SuiteEntry> out;

  SuiteEntry g = tolerance_entry("gamma_subset_identity", 1e-9);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + t % 5;
    std::vector<double> w(n);
    for (double& v : w) v = unit(rng);
    double total = 0.0;
    for (double v : w) total += v;
    std::vector<Complex> z(n);
    double partial = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
      z[i] = w[i] / total;
      partial += z[i].real();
    }
    z[n - 1] = 1.0 - partial;
    g.residual = std::max(g.residual, gamma_subset_identity_residual(z));
    ++g.cases;
  }
  finish(g);
  out.push_back(g);

  SuiteEntry b = tolerance_entry("beta_multinomial_identity", 1e-9);
  std::uniform_real_distribution<double> shape(0.2, 3.0);
  for (int m = 1; m <= 5; ++m)
    for (unsigned r = 0; r <= 6; ++r) {
      std::vector<Complex> s(m);
      for (auto& v : s) v = shape(rng);
      b.residual = std::max(b.residual, beta_multinomial_identity_residual(s, r));
      ++b.cases;
    }
  finish(b);
  out.push_back(b);

  // certified entries: every case must sit below its own bound; the entry
  // reports the worst residual and the smallest bound
  SuiteEntry rf;
  rf.name = "ramanujan_formula";
  rf.bound = std::numeric_limits<double>::infinity();
  bool ok = true;
  for (int m = 1; m <= 100; ++m) {
    const IdentityResidual r = ramanujan_formula_residual(3.0, m, 10'000);
    rf.residual = std::max(rf.residual, r.residual);
    rf.bound = std::min(rf.bound, r.bound);
    ok = ok && r.holds();
    ++rf.cases;
  }
  rf.passed = ok;
  out.push_back(rf);

  const IdentityResidual q = quadruple_zeta_residual(3.0, -0.4, -0.7, 1'000'000);
  out.push_back({"quadruple_zeta_identity", q.residual, q.bound, 1, q.holds()});

  const IdentityResidual av = averaged_identity_residual(2.2, 3.1, 2000);
  out.push_back({"averaged_estermann_identity", av.residual, av.bound, 1, av.holds()});
  return out;
}

std::vector<SuiteEntry> constants_suite(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<SuiteEntry> out;

  // exact value and a float re-summation of the local factor at p = 2
  SuiteEntry r = tolerance_entry("rho(-1,1,2)=8/7", 1e-12);
  const RationalValue v = rho(CoefficientVector{-1, 1, 2});
  double oracle = 1.0;
  {
    // nu_2 = (0, 0, 1), k = 3: 1 + sum_m (1 - 1/2) 2^m prod 2^{-max(0, m - nu_i)}
    long double num = 1.0L;
    for (int m = 1; m <= 60; ++m) num += 0.5L * std::pow(2.0L, m) * std::pow(2.0L, -(2 * m + std::max(0, m - 1)));
    const long double den = 1.0L + 1.0L / (8.0L - 2.0L);
    oracle = static_cast<double>(num / den);
  }
  r.residual = v == RationalValue(8, 7) ? std::abs(to_double(v) - oracle) : 1.0;
  r.cases = 1;
  finish(r);
  out.push_back(r);

  SuiteEntry h = tolerance_entry("rho_homogeneity", 0.0);
  for (int t = 0; t < 50; ++t) {
    const CoefficientVector a(random_vector(rng, 3 + t % 3, 20));
    const RationalValue base = rho(a);
    for (int q : {2, 3, 5}) {
      h.residual = std::max(h.residual, rho(a.scaled(q)) == base * q ? 0.0 : 1.0);
      ++h.cases;
    }
  }
  finish(h);
  out.push_back(h);

  // residual = number of vectors violating the inequality
  SuiteEntry bnd = tolerance_entry("rho_bounds", 0.0);
  SuiteEntry ext = tolerance_entry("rho_bounds_extended", 0.0);
  while (bnd.cases < 200) {
    const CoefficientVector a(random_vector(rng, 3 + static_cast<int>(bnd.cases % 3), 20));
    if (a.gcd() != 1) continue;
    const RhoBounds rb = rho_bounds(a);
    bnd.residual += rb.holds ? 0.0 : 1.0;
    ext.residual += rb.holds_extended ? 0.0 : 1.0;
    ++bnd.cases;
    ++ext.cases;
  }
  finish(bnd);
  finish(ext);
  out.push_back(bnd);
  out.push_back(ext);
  return out;
}

}  // namespace divcorr
