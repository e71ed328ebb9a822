#include "copulaband/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "copulaband/error.hpp"

namespace copulaband {
namespace {

// Antiderivatives of t^j k(t), j = 0, 1, 2.
double prim0(double t) noexcept { return 0.75 * t - 0.25 * t * t * t; }
double prim1(double t) noexcept {
  const double t2 = t * t;
  return 0.375 * t2 - 0.1875 * t2 * t2;
}
double prim2(double t) noexcept {
  const double t3 = t * t * t;
  return 0.25 * t3 - 0.15 * t3 * t * t;
}

constexpr double kMinDeterminant = 1e-14;

}  // namespace

double epanechnikov(double t) noexcept {
  return std::abs(t) <= 1.0 ? 0.75 * (1.0 - t * t) : 0.0;
}

double epanechnikov_cdf(double x) noexcept {
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return 0.5 + prim0(x);
}

CdfPolynomial epanechnikov_cdf_polynomial() noexcept {
  return CdfPolynomial{-1.0, 1.0, {0.5, 0.75, 0.0, -0.25, 0.0}};
}

double CdfPolynomial::operator()(double x) const noexcept {
  if (x <= lo) return 0.0;
  if (x >= hi) return 1.0;
  return coeff[0] + x * (coeff[1] + x * (coeff[2] + x * (coeff[3] + x * coeff[4])));
}

KernelMoments kernel_moments(double u, double h) {
  require(h > 0.0 && std::isfinite(h), "kernel bandwidth must be positive, got " + std::to_string(h));
  require(u >= 0.0 && u <= 1.0, "kernel location must lie in [0,1], got " + std::to_string(u));
  KernelMoments m;
  m.lo = std::max(-1.0, (u - 1.0) / h);
  m.hi = std::min(1.0, u / h);
  m.a0 = prim0(m.hi) - prim0(m.lo);
  m.a1 = prim1(m.hi) - prim1(m.lo);
  m.a2 = prim2(m.hi) - prim2(m.lo);
  return m;
}

LocalKernel::LocalKernel(double u, double h) : u_(u), h_(h), m_(kernel_moments(u, h)) {
  const double det = m_.determinant();
  if (!(det > kMinDeterminant)) {
    fail(ErrorCategory::numeric, "degenerate local-linear kernel at u=" + std::to_string(u) +
                                     ", h=" + std::to_string(h));
  }
  inv_det_ = 1.0 / det;
}

double LocalKernel::density(double t) const noexcept {
  if (t < m_.lo || t > m_.hi) return 0.0;
  return epanechnikov(t) * (m_.a2 - m_.a1 * t) * inv_det_;
}

double LocalKernel::cdf(double x) const noexcept {
  if (x <= m_.lo) return 0.0;
  if (x >= m_.hi) return 1.0;
  const double f0 = prim0(x) - prim0(m_.lo);
  const double f1 = prim1(x) - prim1(m_.lo);
  return (m_.a2 * f0 - m_.a1 * f1) * inv_det_;
}

CdfPolynomial LocalKernel::polynomial() const noexcept {
  CdfPolynomial p;
  p.lo = m_.lo;
  p.hi = m_.hi;
  p.coeff[0] = -(m_.a2 * prim0(m_.lo) - m_.a1 * prim1(m_.lo)) * inv_det_;
  p.coeff[1] = 0.75 * m_.a2 * inv_det_;
  p.coeff[2] = -0.375 * m_.a1 * inv_det_;
  p.coeff[3] = -0.25 * m_.a2 * inv_det_;
  p.coeff[4] = 0.1875 * m_.a1 * inv_det_;
  return p;
}

}  // namespace copulaband
