#pragma once

#include <array>

namespace copulaband {

/// Epanechnikov density 0.75 (1 - t^2) on [-1, 1].
double epanechnikov(double t) noexcept;

/// Truncated moments a_j = \int_lo^hi t^j k(t) dt of the Epanechnikov kernel,
/// where [lo, hi] = [max(-1, (u-1)/h), min(1, u/h)].
struct KernelMoments {
  double a0 = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double lo = -1.0;
  double hi = 1.0;

  double determinant() const noexcept { return a0 * a2 - a1 * a1; }
};

/// Closed form; throws on h <= 0 or u outside [0, 1].
KernelMoments kernel_moments(double u, double h);

/// Monomial form of a kernel CDF on its support:
///   F(x) = 0 for x <= lo, 1 for x >= hi, sum_k coeff[k] x^k otherwise.
/// This is the representation consumed by the batch kernels in simd/.
struct CdfPolynomial {
  double lo = -1.0;
  double hi = 1.0;
  std::array<double, 5> coeff{};

  double operator()(double x) const noexcept;
};

/// Local-linear boundary-corrected kernel at location u with bandwidth h:
///   k_{u,h}(t) = k(t) (a2 - a1 t) / (a0 a2 - a1^2)  on [lo, hi].
/// Away from the edges (u - h >= 0 and u + h <= 1) it coincides with k.
class LocalKernel {
 public:
  /// Throws Error(numeric) when a0 a2 - a1^2 falls below 1e-14.
  LocalKernel(double u, double h);

  double u() const noexcept { return u_; }
  double h() const noexcept { return h_; }
  const KernelMoments& moments() const noexcept { return m_; }

  double density(double t) const noexcept;
  /// Integral of density() from -inf to x, evaluated from the antiderivative.
  double cdf(double x) const noexcept;

  CdfPolynomial polynomial() const noexcept;

 private:
  double u_;
  double h_;
  KernelMoments m_;
  double inv_det_;
};

inline double local_linear_density(const LocalKernel& kern, double t) noexcept { return kern.density(t); }
inline double local_linear_cdf(const LocalKernel& kern, double x) noexcept { return kern.cdf(x); }

/// CDF of the plain (uncorrected) Epanechnikov kernel.
double epanechnikov_cdf(double x) noexcept;
CdfPolynomial epanechnikov_cdf_polynomial() noexcept;

}  // namespace copulaband
