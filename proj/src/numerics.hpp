#pragma once

// Internal numerical helpers shared by the library sources.

#include <cmath>
#include <functional>

namespace copulaband::detail {

/// Adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol = 1e-14,
                 double rel_tol = 1e-13);

struct RootResult {
  double x = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Root of an increasing function on [lo, hi] by Newton steps kept inside a
/// shrinking bisection bracket. Stops once |f| <= f_tol or the bracket is at
/// roundoff width. `f` must be increasing; `df` its derivative (may return 0
/// or non-finite values, in which case the step falls back to bisection).
RootResult increasing_root(const std::function<double(double)>& f, const std::function<double(double)>& df,
                           double lo, double hi, double f_tol, int max_iter = 200);

/// log(exp(a) + exp(b)) without overflow.
inline double log_add_exp(double a, double b) noexcept {
  const double m = a > b ? a : b;
  if (m == -INFINITY) return m;
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

}  // namespace copulaband::detail
