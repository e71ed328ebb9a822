#include "copulaband/simd/batch.hpp"

namespace copulaband::simd::scalar {

double cdf_one(const CdfPolynomial& poly, double x) noexcept {
  if (x <= poly.lo) return 0.0;
  if (x >= poly.hi) return 1.0;
  const auto& c = poly.coeff;
  return c[0] + x * (c[1] + x * (c[2] + x * (c[3] + x * c[4])));
}

void cdf_batch(const CdfPolynomial& poly, double center, double inv_h,
               std::span<const double> samples, std::span<double> out) noexcept {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out[i] = cdf_one(poly, (center - samples[i]) * inv_h);
  }
}

double cdf_sum(const CdfPolynomial& poly, double center, double inv_h,
               std::span<const double> samples) noexcept {
  double acc = 0.0;
  for (double s : samples) acc += cdf_one(poly, (center - s) * inv_h);
  return acc;
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace copulaband::simd::scalar
