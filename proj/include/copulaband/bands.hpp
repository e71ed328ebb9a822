#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "copulaband/estimator.hpp"
#include "copulaband/families.hpp"

namespace copulaband {

/// R_n = sqrt(n / (2 log log n)); needs n >= 16.
double rate_rn(std::size_t n);

struct BandParameters {
  double a_c = 3.0;      // LIL constant, 0 < a_c <= 3
  double epsilon = 0.0;  // inflation
  std::size_t n = 0;

  /// Throws Error(config) on a_c outside (0,3], epsilon < 0 or n < 16.
  void validate() const;
};

/// Outer half-width E_n = (1 + epsilon) A(c) / R_n.
double band_halfwidth(const BandParameters& params);
/// Inner half-width Delta_n = (1 - epsilon) A(c) / R_n; the band that must
/// eventually fail to cover.
double inner_halfwidth(const BandParameters& params);

enum class BandKind { outer, inner };

struct BandOptions {
  BandKind kind = BandKind::outer;
  /// Pull the bounds inside the Frechet-Hoeffding envelope (never past the
  /// estimate itself). Presentation only.
  bool clip = false;
};

struct BandGrid {
  std::vector<double> grid_u;
  std::vector<double> grid_v;
  std::vector<double> estimate;  // row-major like GridEvaluation::values
  std::vector<double> lower;
  std::vector<double> upper;
  double halfwidth = 0.0;

  std::size_t index(std::size_t i, std::size_t j) const { return i * grid_v.size() + j; }
  friend bool operator==(const BandGrid&, const BandGrid&) = default;
};

/// Constant half-width band around the estimate. Estimate and half-width are
/// rounded to a common power-of-two spacing (relative change below 1e-15) so
/// that upper - lower == 2 * halfwidth holds bit-exactly at every node.
/// Throws Error(invalid_argument) if grid.n != params.n.
BandGrid confidence_bands(const GridEvaluation& grid, const BandParameters& params, BandOptions opts = {});

struct ContainmentSummary {
  std::size_t nodes = 0;
  std::size_t contained = 0;
  double fraction = 0.0;
  /// Largest distance of the reference outside [lower, upper]; 0 when all contained.
  double worst_violation = 0.0;
  double worst_u = 0.0;
  double worst_v = 0.0;

  bool all() const noexcept { return contained == nodes; }
};

ContainmentSummary containment_report(const BandGrid& bands, const CopulaModel& reference);

/// Band at scattered points (u_k, v_k).
struct PointBand {
  double u = 0.0;
  double v = 0.0;
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

std::vector<PointBand> point_bands(const PseudoSample& sample, std::span<const Point> points,
                                   const BandwidthPolicy& policy, const BandParameters& params,
                                   BandKind kind = BandKind::outer);

}  // namespace copulaband
