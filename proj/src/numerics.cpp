#include "numerics.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace copulaband::detail {
namespace {

constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Estimate {
  double value;
  double error;
};

Estimate gk15(const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(mid);
  double kronrod = fc * kKronrod[7];
  double gauss = fc * kGauss[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kNodes[j];
    const double pair = f(mid - dx) + f(mid + dx);
    kronrod += kKronrod[j] * pair;
    if (j % 2 == 1) gauss += kGauss[j / 2] * pair;
  }
  return {kronrod * half, std::abs((kronrod - gauss) * half)};
}

double adapt(const std::function<double(double)>& f, double a, double b, double abs_tol, double rel_tol,
             int depth) {
  const Estimate e = gk15(f, a, b);
  if (depth >= 48 || e.error <= std::max(abs_tol, rel_tol * std::abs(e.value))) return e.value;
  const double mid = 0.5 * (a + b);
  return adapt(f, a, mid, 0.5 * abs_tol, rel_tol, depth + 1) +
         adapt(f, mid, b, 0.5 * abs_tol, rel_tol, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 double rel_tol) {
  if (a == b) return 0.0;
  return adapt(f, a, b, abs_tol, rel_tol, 0);
}

RootResult increasing_root(const std::function<double(double)>& f, const std::function<double(double)>& df,
                           double lo, double hi, double f_tol, int max_iter) {
  RootResult r;
  const double f_lo = f(lo);
  if (f_lo >= 0.0) return {lo, 0, true};
  const double f_hi = f(hi);
  if (f_hi <= 0.0) return {hi, 0, true};

  double x = 0.5 * (lo + hi);
  for (int it = 1; it <= max_iter; ++it) {
    r.iterations = it;
    const double fx = f(x);
    if (std::abs(fx) <= f_tol) {
      r.x = x;
      r.converged = true;
      return r;
    }
    if (fx < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi))) {
      r.x = 0.5 * (lo + hi);
      r.converged = true;
      return r;
    }
    const double d = df(x);
    const double newton = x - fx / d;
    if (std::isfinite(newton) && d > 0.0 && newton > lo && newton < hi) {
      if (std::abs(newton - x) <= 2.0 * std::numeric_limits<double>::epsilon() * std::abs(x)) {
        r.x = newton;
        r.converged = true;
        return r;
      }
      x = newton;
    } else {
      x = 0.5 * (lo + hi);
    }
  }
  r.x = x;
  return r;
}

}  // namespace copulaband::detail
