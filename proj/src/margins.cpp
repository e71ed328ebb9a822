#include "copulaband/margins.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "copulaband/error.hpp"
#include "copulaband/kernel.hpp"
#include "copulaband/simd/batch.hpp"

namespace copulaband {
namespace {

std::vector<double> rank_column(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double scale = 1.0 / static_cast<double>(values.size() + 1);
  std::vector<double> out;
  out.reserve(values.size());
  for (double x : values) {
    const auto rank = std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin();
    out.push_back(static_cast<double>(rank) * scale);
  }
  return out;
}

std::vector<double> smoothed_column(std::span<const double> values, double bandwidth) {
  std::vector<double> out;
  out.reserve(values.size());
  for (double x : values) out.push_back(smoothed_marginal_cdf(values, bandwidth, x));
  return out;
}

}  // namespace

RawSample::RawSample(std::vector<Point> pairs) : pairs_(std::move(pairs)) {
  require(pairs_.size() >= 2, "a raw sample needs at least 2 rows, got " + std::to_string(pairs_.size()));
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    require(std::isfinite(pairs_[i].x) && std::isfinite(pairs_[i].y),
            "non-finite coordinate in row " + std::to_string(i + 1));
  }
}

std::vector<double> RawSample::xs() const {
  std::vector<double> out;
  out.reserve(pairs_.size());
  for (const Point& p : pairs_) out.push_back(p.x);
  return out;
}

std::vector<double> RawSample::ys() const {
  std::vector<double> out;
  out.reserve(pairs_.size());
  for (const Point& p : pairs_) out.push_back(p.y);
  return out;
}

std::string_view transform_name(Transform t) noexcept {
  switch (t) {
    case Transform::identity: return "identity";
    case Transform::rank: return "rank";
    case Transform::smoothed: return "smoothed";
  }
  return "unknown";
}

PseudoSample::PseudoSample(std::vector<double> u, std::vector<double> v, Transform transform)
    : u_(std::move(u)), v_(std::move(v)), transform_(transform) {
  require(!u_.empty(), "pseudo-sample is empty");
  require(u_.size() == v_.size(), "pseudo-sample columns differ in length");
  for (std::size_t i = 0; i < u_.size(); ++i) {
    require(u_[i] >= 0.0 && u_[i] <= 1.0 && v_[i] >= 0.0 && v_[i] <= 1.0,
            "pseudo-observation " + std::to_string(i + 1) + " lies outside [0,1]^2");
  }
}

double smoothed_marginal_cdf(std::span<const double> values, double bandwidth, double x) {
  require(!values.empty(), "smoothed_marginal_cdf: empty input");
  require(bandwidth > 0.0 && std::isfinite(bandwidth), "smoothed_marginal_cdf: bandwidth must be positive");
  const double sum = simd::cdf_sum(epanechnikov_cdf_polynomial(), x, 1.0 / bandwidth, values);
  return std::clamp(sum / static_cast<double>(values.size()), 0.0, 1.0);
}

double default_margin_bandwidth(std::span<const double> values) {
  require(values.size() >= 2, "default_margin_bandwidth: need at least 2 values");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : values) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  if (!(sd > 0.0)) fail(ErrorCategory::input, "cannot smooth a constant margin");
  return sd * std::pow(n, -1.0 / 3.0);
}

PseudoSample to_pseudo_smoothed(const RawSample& sample, double b1, double b2) {
  require(b1 > 0.0 && b2 > 0.0, "margin bandwidths must be positive");
  const std::vector<double> xs = sample.xs();
  const std::vector<double> ys = sample.ys();
  return PseudoSample(smoothed_column(xs, b1), smoothed_column(ys, b2), Transform::smoothed);
}

PseudoSample to_pseudo_smoothed(const RawSample& sample) {
  const std::vector<double> xs = sample.xs();
  const std::vector<double> ys = sample.ys();
  return PseudoSample(smoothed_column(xs, default_margin_bandwidth(xs)),
                      smoothed_column(ys, default_margin_bandwidth(ys)), Transform::smoothed);
}

PseudoSample to_pseudo_ranks(const RawSample& sample) {
  return PseudoSample(rank_column(sample.xs()), rank_column(sample.ys()), Transform::rank);
}

PseudoSample to_pseudo(const RawSample& sample, Transform transform) {
  switch (transform) {
    case Transform::rank: return to_pseudo_ranks(sample);
    case Transform::smoothed: return to_pseudo_smoothed(sample);
    case Transform::identity: break;
  }
  return PseudoSample(sample.xs(), sample.ys(), Transform::identity);
}

}  // namespace copulaband
