#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "copulaband/margins.hpp"

namespace copulaband {

/// How a shrunk bandwidth enters the local-linear kernel.
enum class BandwidthReading {
  /// One effective bandwidth drives both the boundary correction and the
  /// argument scaling: K_{u,h(u)}((u - U) / h(u)). Default.
  local_correction,
  /// Correction at the global h_n, argument scaled by the shrunk bandwidth:
  /// K_{u,h_n}((u - U) / h(u)). Kept for comparison.
  scaled_argument,
};

std::string_view reading_name(BandwidthReading r) noexcept;

struct BandwidthPolicy {
  double h_n = 0.1;       // global rate
  double alpha = 0.5;     // shrinkage exponent
  double h_min = 0.0;     // clamp floor
  double h_max = 1.0;     // clamp ceiling
  bool shrink_enabled = true;
  BandwidthReading reading = BandwidthReading::local_correction;

  /// h_n = 1/log n, alpha = 0.5, h_min = log(n)/n, h_max = ((log log n)/n)^{1/4}.
  /// Throws Error(config) when n is too small for h_min <= h_max < 1.
  static BandwidthPolicy defaults(std::size_t n);

  /// Throws Error(config) unless h_n > 0, alpha > 0, 0 < h_min <= h_max < 1.
  void validate() const;

  friend bool operator==(const BandwidthPolicy&, const BandwidthPolicy&) = default;
};

/// b(u,v) = max{ min(u^a, (1-u)^a), min(v^a, (1-v)^a) }.
double shrink_factor(double u, double v, double alpha);

/// clamp(h_n * b(u,v), h_min, h_max), or clamp(h_n, ...) with shrinkage off.
double effective_bandwidth(double u, double v, const BandwidthPolicy& policy);

/// (1/n) sum_i K_{u,h_u}((u - U_i)/h_u) K_{v,h_v}((v - V_i)/h_v) with
/// h_u = effective_bandwidth(u, 1), h_v = effective_bandwidth(1, v).
/// Not clipped: boundary-corrected weights can push it marginally outside
/// [0,1] near the edges of the square.
double ll_copula_estimate(const PseudoSample& sample, double u, double v, const BandwidthPolicy& policy);

/// Deheuvels empirical copula (1/n) #{U_i <= u, V_i <= v}.
double empirical_copula(const PseudoSample& sample, double u, double v);

struct GridEvaluation {
  std::vector<double> grid_u;
  std::vector<double> grid_v;
  std::vector<double> values;  // row-major, values[i * grid_v.size() + j] at (grid_u[i], grid_v[j])
  std::size_t n = 0;
  BandwidthPolicy policy;

  double at(std::size_t i, std::size_t j) const { return values[i * grid_v.size() + j]; }
};

/// {0, 1/(size-1), ..., 1}; size >= 2.
std::vector<double> uniform_lattice(std::size_t size);

struct EvalOptions {
  unsigned threads = 0;  // 0: std::thread::hardware_concurrency()
};

/// Estimator on the tensor grid grid_u x grid_v. Nodes are independent, so
/// the result does not depend on the thread count.
GridEvaluation evaluate_on(const PseudoSample& sample, std::span<const double> grid_u,
                           std::span<const double> grid_v, const BandwidthPolicy& policy, EvalOptions opts = {});

/// Estimator on uniform_lattice(grid_size)^2.
GridEvaluation evaluate_grid(const PseudoSample& sample, std::size_t grid_size, const BandwidthPolicy& policy,
                             EvalOptions opts = {});

}  // namespace copulaband
