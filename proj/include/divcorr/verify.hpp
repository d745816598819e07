#pragma once

// Residual suites shared by the CLI `verify` command and the acceptance run.

#include <cstdint>
#include <string>
#include <vector>

namespace divcorr {

struct SuiteEntry {
  std::string name;
  double residual = 0.0;  // largest residual over the cases of this entry
  double bound = 0.0;     // bound it is compared against (tolerance or certified tail)
  std::size_t cases = 0;
  bool passed = false;
};

// Gamma subset identity (20 random simplex points, |I| = 2..6), Beta multinomial
// identity (m <= 5, r <= 6), Ramanujan's formula (s = 3, m <= 100, L = 10^4),
// quadruple zeta (s = 3, alpha = -0.4, beta = -0.7, T = 10^6) and the averaged
// Estermann identity ((s, w) = (2.2, 3.1), L = 2000).
std::vector<SuiteEntry> identity_suite(std::uint64_t seed);

// rho(-1,1,2) = 8/7, rho(qa) = q rho(a), rho bounds, kappa examples.
std::vector<SuiteEntry> constants_suite(std::uint64_t seed);

}  // namespace divcorr
