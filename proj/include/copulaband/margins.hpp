#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace copulaband {

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

/// Paired raw observations; at least two rows, all coordinates finite.
class RawSample {
 public:
  explicit RawSample(std::vector<Point> pairs);

  std::size_t size() const noexcept { return pairs_.size(); }
  const std::vector<Point>& pairs() const noexcept { return pairs_; }
  std::vector<double> xs() const;
  std::vector<double> ys() const;

 private:
  std::vector<Point> pairs_;
};

/// How a PseudoSample was produced. `identity` marks draws that are already
/// uniform on [0,1]^2 (simulated copula samples).
enum class Transform { identity, rank, smoothed };

std::string_view transform_name(Transform t) noexcept;

/// Pseudo-observations in [0,1]^2 stored column-wise.
class PseudoSample {
 public:
  /// Throws unless u and v have equal, nonzero length with entries in [0,1].
  PseudoSample(std::vector<double> u, std::vector<double> v, Transform transform);

  std::size_t size() const noexcept { return u_.size(); }
  std::span<const double> u() const noexcept { return u_; }
  std::span<const double> v() const noexcept { return v_; }
  Transform transform() const noexcept { return transform_; }

  friend bool operator==(const PseudoSample&, const PseudoSample&) = default;

 private:
  std::vector<double> u_;
  std::vector<double> v_;
  Transform transform_;
};

/// (1/n) sum_i K((x - values_i) / bandwidth), K the Epanechnikov CDF.
double smoothed_marginal_cdf(std::span<const double> values, double bandwidth, double x);

/// Sample standard deviation times n^(-1/3). Throws for a constant column.
double default_margin_bandwidth(std::span<const double> values);

/// U_i = F_n,smooth(X_i), V_i = G_n,smooth(Y_i).
PseudoSample to_pseudo_smoothed(const RawSample& sample, double b1, double b2);
/// Same with default_margin_bandwidth for each column.
PseudoSample to_pseudo_smoothed(const RawSample& sample);

/// U_i = rank(X_i) / (n + 1), rank = #{j : X_j <= X_i}. Tied values share the
/// largest rank, matching the empirical CDF.
PseudoSample to_pseudo_ranks(const RawSample& sample);

/// Dispatch on `transform`; identity requires the data to lie in [0,1]^2.
PseudoSample to_pseudo(const RawSample& sample, Transform transform);

}  // namespace copulaband
