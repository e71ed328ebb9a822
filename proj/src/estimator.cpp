#include "copulaband/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <thread>

#include "copulaband/error.hpp"
#include "copulaband/kernel.hpp"
#include "copulaband/simd/batch.hpp"

namespace copulaband {
namespace {

struct AxisKernel {
  CdfPolynomial poly;
  double center;
  double inv_scale;
};

// Kernel factor for one coordinate; `shrunk` is the effective bandwidth there.
AxisKernel axis_kernel(double w, double shrunk, const BandwidthPolicy& policy) {
  const double correction_h = policy.reading == BandwidthReading::local_correction ? shrunk : policy.h_n;
  return AxisKernel{LocalKernel(w, correction_h).polynomial(), w, 1.0 / shrunk};
}

AxisKernel u_kernel(double u, const BandwidthPolicy& policy) {
  return axis_kernel(u, effective_bandwidth(u, 1.0, policy), policy);
}

AxisKernel v_kernel(double v, const BandwidthPolicy& policy) {
  return axis_kernel(v, effective_bandwidth(1.0, v, policy), policy);
}

void check_point(double u, double v) {
  require(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0, "evaluation point must lie in [0,1]^2");
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

std::string_view reading_name(BandwidthReading r) noexcept {
  switch (r) {
    case BandwidthReading::local_correction: return "local_correction";
    case BandwidthReading::scaled_argument: return "scaled_argument";
  }
  return "unknown";
}

BandwidthPolicy BandwidthPolicy::defaults(std::size_t n) {
  if (n < 3) fail(ErrorCategory::config, "default bandwidths need n >= 3, got " + std::to_string(n));
  const double dn = static_cast<double>(n);
  const double log_n = std::log(dn);
  BandwidthPolicy p;
  p.h_n = 1.0 / log_n;
  p.alpha = 0.5;
  p.h_min = log_n / dn;
  p.h_max = std::pow(std::log(log_n) / dn, 0.25);
  p.validate();
  return p;
}

void BandwidthPolicy::validate() const {
  if (!(h_n > 0.0) || !std::isfinite(h_n)) fail(ErrorCategory::config, "h_n must be positive");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) fail(ErrorCategory::config, "shrinkage exponent must be positive");
  if (!(h_min > 0.0)) fail(ErrorCategory::config, "h_min must be positive");
  if (!(h_max < 1.0)) fail(ErrorCategory::config, "h_max must be below 1, got " + num(h_max));
  if (!(h_min <= h_max)) {
    fail(ErrorCategory::config, "bandwidth clamp is empty: h_min=" + num(h_min) + " > h_max=" + num(h_max));
  }
}

double shrink_factor(double u, double v, double alpha) {
  require(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0, "shrink_factor: arguments must lie in [0,1]");
  require(alpha > 0.0, "shrink_factor: alpha must be positive");
  const double bu = std::min(std::pow(u, alpha), std::pow(1.0 - u, alpha));
  const double bv = std::min(std::pow(v, alpha), std::pow(1.0 - v, alpha));
  return std::max(bu, bv);
}

double effective_bandwidth(double u, double v, const BandwidthPolicy& policy) {
  const double raw = policy.shrink_enabled ? policy.h_n * shrink_factor(u, v, policy.alpha) : policy.h_n;
  return std::clamp(raw, policy.h_min, policy.h_max);
}

double ll_copula_estimate(const PseudoSample& sample, double u, double v, const BandwidthPolicy& policy) {
  policy.validate();
  check_point(u, v);
  const AxisKernel ku = u_kernel(u, policy);
  const AxisKernel kv = v_kernel(v, policy);
  const std::size_t n = sample.size();
  std::vector<double> fu(n);
  std::vector<double> fv(n);
  simd::cdf_batch(ku.poly, ku.center, ku.inv_scale, sample.u(), fu);
  simd::cdf_batch(kv.poly, kv.center, kv.inv_scale, sample.v(), fv);
  return simd::dot(fu, fv) / static_cast<double>(n);
}

double empirical_copula(const PseudoSample& sample, double u, double v) {
  const auto us = sample.u();
  const auto vs = sample.v();
  std::size_t count = 0;
  for (std::size_t i = 0; i < us.size(); ++i) {
    if (us[i] <= u && vs[i] <= v) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(us.size());
}

std::vector<double> uniform_lattice(std::size_t size) {
  require(size >= 2, "grid size must be at least 2");
  std::vector<double> out(size);
  const double step = static_cast<double>(size - 1);
  for (std::size_t i = 0; i < size; ++i) out[i] = static_cast<double>(i) / step;
  return out;
}

GridEvaluation evaluate_on(const PseudoSample& sample, std::span<const double> grid_u,
                           std::span<const double> grid_v, const BandwidthPolicy& policy, EvalOptions opts) {
  policy.validate();
  require(!grid_u.empty() && !grid_v.empty(), "evaluation grid is empty");
  for (double u : grid_u) check_point(u, 0.0);
  for (double v : grid_v) check_point(0.0, v);

  const std::size_t n = sample.size();
  const std::size_t nu = grid_u.size();
  const std::size_t nv = grid_v.size();
  const double inv_n = 1.0 / static_cast<double>(n);

  // One row of kernel factors per v node, shared by every u row.
  std::vector<double> fv(nv * n);
  for (std::size_t j = 0; j < nv; ++j) {
    const AxisKernel kv = v_kernel(grid_v[j], policy);
    simd::cdf_batch(kv.poly, kv.center, kv.inv_scale, sample.v(), std::span<double>(fv).subspan(j * n, n));
  }
  std::vector<AxisKernel> ku;
  ku.reserve(nu);
  for (double u : grid_u) ku.push_back(u_kernel(u, policy));

  GridEvaluation out;
  out.grid_u.assign(grid_u.begin(), grid_u.end());
  out.grid_v.assign(grid_v.begin(), grid_v.end());
  out.values.assign(nu * nv, 0.0);
  out.n = n;
  out.policy = policy;

  const auto rows = [&](std::size_t first, std::size_t stride) {
    std::vector<double> fu(n);
    for (std::size_t i = first; i < nu; i += stride) {
      simd::cdf_batch(ku[i].poly, ku[i].center, ku[i].inv_scale, sample.u(), fu);
      for (std::size_t j = 0; j < nv; ++j) {
        out.values[i * nv + j] = simd::dot(fu, std::span<const double>(fv).subspan(j * n, n)) * inv_n;
      }
    }
  };

  unsigned threads = opts.threads != 0 ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, nu));
  if (threads <= 1) {
    rows(0, 1);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(rows, t, threads);
  }
  return out;
}

GridEvaluation evaluate_grid(const PseudoSample& sample, std::size_t grid_size, const BandwidthPolicy& policy,
                             EvalOptions opts) {
  const std::vector<double> lattice = uniform_lattice(grid_size);
  return evaluate_on(sample, lattice, lattice, policy, opts);
}

}  // namespace copulaband
