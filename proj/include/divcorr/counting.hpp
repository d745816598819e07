#pragma once

// Rational points of bounded anticanonical height on
// a_1 x_1 y_1 + ... + a_k x_k y_k = 0 in P^{k-1} x P^{k-1}, and the
// archimedean densities that enter the predicted leading constant.

#include <chrono>
#include <cstdint>
#include <span>
#include <vector>

#include "divcorr/constants.hpp"
#include "divcorr/series.hpp"

namespace divcorr {

struct PointCountResult {
  double B = 0.0;
  std::uint64_t count = 0;
  std::uint64_t enumerated_pairs = 0;
  std::chrono::duration<double> elapsed{};
};

// Number of pairs ([x], [y]) with all coordinates non-zero, x and y primitive,
// (max|x_i| max|y_j|)^{k-1} < B and sum a_i x_i y_i = 0; signs are identified.
PointCountResult count_points(const CoefficientVector& a, double B);

// Same count at every B of the grid from a single enumeration up to max(grid).
// enumerated_pairs and elapsed refer to that shared enumeration.
std::vector<PointCountResult> count_points_grid(const CoefficientVector& a, std::span<const double> grid);

// Reference count: every canonical x, every y_1..y_{k-1} in the height box,
// y_k solved by exact division. Slow; for cross-checking only.
PointCountResult count_points_oracle(const CoefficientVector& a, double B);

struct VolumeEstimate {
  enum class Method { qmc, nested_quadrature };
  double value = 0.0;
  double standard_error = 0.0;
  std::uint64_t samples = 0;
  Method method = Method::qmc;
};

// Volume of {(x_j, y_j)_{j != i} in [-1,1]^{2k-2} : |sum_{j != i} a_j x_j y_j| < |a_i|}
// by a Halton sequence; i is 1-based. The error is half the gap between the
// estimates from the two halves of the point set.
VolumeEstimate sigma_volume(const CoefficientVector& a, int i, std::uint64_t samples);
// Same integral for k = 3 by nested adaptive Gauss-Kronrod rules.
VolumeEstimate sigma_volume_quadrature(const CoefficientVector& a, int i, double tolerance = 1e-6);

struct Prediction {
  double value = 0.0;
  double error = 0.0;
  double singular_series = 0.0;
  std::vector<VolumeEstimate> sigma;
};

// S(a) (sigma_1 + ... + sigma_k) / (k - 1), the coefficient of B log B.
Prediction leading_term_prediction(const CoefficientVector& a, std::uint64_t samples);

// Least squares of N(B) = C B log B + f B; coefficients are (C, f).
FitResult fit_count_asymptotic(const CoefficientVector& a, std::span<const double> grid,
                               std::span<const PointCountResult> counts);
// Same fit on raw (B, N) samples.
FitResult fit_count_asymptotic(std::span<const std::pair<double, double>> samples);

// Largest integer P with P^{k-1} < B (0 if none).
std::uint64_t height_cutoff(double B, int k);

}  // namespace divcorr
