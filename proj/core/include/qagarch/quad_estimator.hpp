#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qagarch/estimation.hpp"
#include "qagarch/likelihood.hpp"
#include "qagarch/localization.hpp"

namespace qagarch {

/// m points on the main diagonal of `box`, both corners included, with every
/// coordinate advancing linearly together.
/// Throws InvalidInput for m < 3 or a zero-width coordinate.
[[nodiscard]] std::vector<std::vector<double>> diagonal_cut(const SearchBox& box, std::size_t m);

/// Least-squares quadratic through (xs, ys).
///
/// The abscissae are centered and scaled to [-1, 1] and the system is solved
/// by column-pivoted Householder QR; coefficients are mapped back to the
/// original x. Throws InvalidInput for fewer than 3 points, mismatched sizes
/// or a rank-deficient design.
[[nodiscard]] QuadraticFit fit_quadratic(std::span<const double> xs, std::span<const double> ys,
                                         std::size_t coordinate_index = 0);

/// −a1 / (2·a2). Throws EstimationError when a2 <= 0.
[[nodiscard]] double vertex(const QuadraticFit& fit);

struct QuadFitConfig {
  LocalizationConfig localization;
  std::size_t m = 100;
  InitPolicy policy;
};

/// find_omega_bar → localize → diagonal_cut → per-coordinate fit → vertices.
///
/// Vertices outside the box are clamped and flagged. A non-convex fit throws
/// EstimationError naming the coordinate.
[[nodiscard]] EstimationResult estimate(const ObjectiveFunctions& objective, GarchOrder order,
                                        const QuadFitConfig& config = {});
[[nodiscard]] EstimationResult estimate(const TimeSeries& series, GarchOrder order,
                                        const QuadFitConfig& config = {});

}  // namespace qagarch
