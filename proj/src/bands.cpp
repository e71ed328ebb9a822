#include "copulaband/bands.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "copulaband/error.hpp"

namespace copulaband {
namespace {

double halfwidth_for(const BandParameters& params, BandKind kind) {
  return kind == BandKind::outer ? band_halfwidth(params) : inner_halfwidth(params);
}

// Power-of-two spacing fine enough that every est +- hw (|est| + hw <= bound)
// and their difference 2 hw are exact doubles once est and hw are multiples
// of it.
double exact_quantum(double bound) {
  if (!(bound > 0.0) || !std::isfinite(bound)) return 0.0;
  return std::ldexp(1.0, std::ilogb(bound) - 51);
}

double snap(double x, double q) { return q > 0.0 ? std::nearbyint(x / q) * q : x; }

}  // namespace

double rate_rn(std::size_t n) {
  require(n >= 16, "R_n needs n >= 16, got " + std::to_string(n));
  const double dn = static_cast<double>(n);
  return std::sqrt(dn / (2.0 * std::log(std::log(dn))));
}

void BandParameters::validate() const {
  if (!(a_c > 0.0 && a_c <= 3.0)) fail(ErrorCategory::config, "A(c) must lie in (0,3]");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) fail(ErrorCategory::config, "epsilon must be >= 0");
  if (n < 16) fail(ErrorCategory::config, "bands need n >= 16, got " + std::to_string(n));
}

double band_halfwidth(const BandParameters& params) {
  params.validate();
  return (1.0 + params.epsilon) * params.a_c / rate_rn(params.n);
}

double inner_halfwidth(const BandParameters& params) {
  params.validate();
  return (1.0 - params.epsilon) * params.a_c / rate_rn(params.n);
}

BandGrid confidence_bands(const GridEvaluation& grid, const BandParameters& params, BandOptions opts) {
  require(grid.n == params.n, "band parameters are for n=" + std::to_string(params.n) + " but the grid has n=" +
                                  std::to_string(grid.n));
  require(grid.values.size() == grid.grid_u.size() * grid.grid_v.size(), "grid values do not match its lattice");
  BandGrid out;
  out.grid_u = grid.grid_u;
  out.grid_v = grid.grid_v;
  const double hw = halfwidth_for(params, opts.kind);
  double bound = 0.0;
  for (double e : grid.values) bound = std::max(bound, std::abs(e));
  const double q = exact_quantum(bound + hw);
  out.halfwidth = snap(hw, q);
  out.estimate.reserve(grid.values.size());
  for (double e : grid.values) out.estimate.push_back(snap(e, q));
  out.lower.resize(out.estimate.size());
  out.upper.resize(out.estimate.size());
  for (std::size_t i = 0; i < out.grid_u.size(); ++i) {
    for (std::size_t j = 0; j < out.grid_v.size(); ++j) {
      const std::size_t k = out.index(i, j);
      const double est = out.estimate[k];
      double lo = est - out.halfwidth;
      double hi = est + out.halfwidth;
      if (opts.clip) {
        const double u = out.grid_u[i];
        const double v = out.grid_v[j];
        lo = std::min(est, std::max(lo, std::max(u + v - 1.0, 0.0)));
        hi = std::max(est, std::min(hi, std::min(u, v)));
      }
      out.lower[k] = lo;
      out.upper[k] = hi;
    }
  }
  return out;
}

ContainmentSummary containment_report(const BandGrid& bands, const CopulaModel& reference) {
  ContainmentSummary s;
  for (std::size_t i = 0; i < bands.grid_u.size(); ++i) {
    for (std::size_t j = 0; j < bands.grid_v.size(); ++j) {
      const std::size_t k = bands.index(i, j);
      const double c = cdf(reference, bands.grid_u[i], bands.grid_v[j]);
      ++s.nodes;
      const double miss = std::max(bands.lower[k] - c, c - bands.upper[k]);
      if (miss <= 0.0) {
        ++s.contained;
      } else if (miss > s.worst_violation) {
        s.worst_violation = miss;
        s.worst_u = bands.grid_u[i];
        s.worst_v = bands.grid_v[j];
      }
    }
  }
  s.fraction = s.nodes == 0 ? 0.0 : static_cast<double>(s.contained) / static_cast<double>(s.nodes);
  return s;
}

std::vector<PointBand> point_bands(const PseudoSample& sample, std::span<const Point> points,
                                   const BandwidthPolicy& policy, const BandParameters& params, BandKind kind) {
  require(sample.size() == params.n, "band parameters do not match the sample size");
  const double raw_hw = halfwidth_for(params, kind);
  std::vector<PointBand> out;
  out.reserve(points.size());
  for (const Point& p : points) {
    const double raw = ll_copula_estimate(sample, p.x, p.y, policy);
    const double q = exact_quantum(std::abs(raw) + raw_hw);
    const double est = snap(raw, q);
    const double hw = snap(raw_hw, q);
    out.push_back(PointBand{p.x, p.y, est, est - hw, est + hw});
  }
  return out;
}

}  // namespace copulaband
