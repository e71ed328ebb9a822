#include "copulaband/families.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "copulaband/error.hpp"
#include "numerics.hpp"

namespace copulaband {
namespace {

using detail::log_add_exp;

constexpr double kBracketLo = 1e-12;
constexpr double kBracketHi = 1.0 - 1e-12;

std::string fmt_double(double x) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

void check_unit(double u, double v) {
  require(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0,
          "copula arguments must lie in [0,1], got (" + fmt_double(u) + ", " + fmt_double(v) + ")");
}

void check_interior(double u, double v) {
  require(u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0,
          "copula density needs interior arguments, got (" + fmt_double(u) + ", " + fmt_double(v) + ")");
}

// ---- Clayton ---------------------------------------------------------------

// log(u^-t + v^-t - 1)
double clayton_log_sum(double theta, double lu, double lv) {
  const double a = -theta * lu;
  const double b = -theta * lv;
  if (std::max(a, b) < 50.0) return std::log1p(std::expm1(a) + std::expm1(b));
  const double l = log_add_exp(a, b);
  return l + std::log1p(-std::exp(-l));
}

double clayton_cdf(double theta, double u, double v) {
  return std::exp(-clayton_log_sum(theta, std::log(u), std::log(v)) / theta);
}

double clayton_log_conditional(double theta, double v, double u) {
  const double lu = std::log(u);
  return (-theta - 1.0) * lu - (1.0 / theta + 1.0) * clayton_log_sum(theta, lu, std::log(v));
}

double clayton_log_density(double theta, double u, double v) {
  const double lu = std::log(u);
  const double lv = std::log(v);
  return std::log1p(theta) + (-theta - 1.0) * (lu + lv) - (1.0 / theta + 2.0) * clayton_log_sum(theta, lu, lv);
}

double clayton_inverse(double theta, double w, double u) {
  // v^-t - 1 = u^-t (w^(-t/(1+t)) - 1)
  const double log_t = -theta * std::log(u) + std::log(std::expm1(-theta / (1.0 + theta) * std::log(w)));
  const double log1p_t = log_t > 30.0 ? log_t + std::log1p(std::exp(-log_t)) : std::log1p(std::exp(log_t));
  return std::exp(-log1p_t / theta);
}

// ---- Frank (theta > 0; negative parameters use the rotation identity) ----

// N = (e^{-t}-1) + (e^{-tu}-1)(e^{-tv}-1), always negative for t > 0.
// Returns log(-N) and also r = (e^{-tu}-1)(e^{-tv}-1)/(e^{-t}-1).
struct FrankTerms {
  double log_neg_n;
  double r;
  double c;  // e^{-t} - 1
};

FrankTerms frank_terms(double theta, double u, double v) {
  const double a = std::expm1(-theta * u);
  const double b = std::expm1(-theta * v);
  const double c = std::expm1(-theta);
  const double r = a * b / c;
  double log_neg_n;
  if (r > -0.5) {
    log_neg_n = std::log(-c) + std::log1p(r);
  } else {
    const double n = std::exp(-theta) - std::exp(-theta * u) - std::exp(-theta * v) + std::exp(-theta * (u + v));
    log_neg_n = std::log(-n);
  }
  return {log_neg_n, r, c};
}

double frank_pos_cdf(double theta, double u, double v) {
  const FrankTerms t = frank_terms(theta, u, v);
  if (t.r > -0.5) return -std::log1p(t.r) / theta;
  return -(t.log_neg_n - std::log(-t.c)) / theta;
}

double frank_pos_conditional(double theta, double v, double u) {
  const FrankTerms t = frank_terms(theta, u, v);
  // e^{-tu} (e^{-tv} - 1) / N, both factors of the ratio negative
  return std::exp(-theta * u + std::log(-std::expm1(-theta * v)) - t.log_neg_n);
}

double frank_pos_log_density(double theta, double u, double v) {
  const FrankTerms t = frank_terms(theta, u, v);
  return std::log(theta) + std::log(-t.c) - theta * (u + v) - 2.0 * t.log_neg_n;
}

double frank_pos_inverse(double theta, double w, double u) {
  if (theta < 1.0) {
    const double c = std::expm1(-theta);
    const double b = w * c / (w + (1.0 - w) * std::exp(-theta * u));
    return -std::log1p(b) / theta;
  }
  const double lw = std::log(w);
  const double l1w = std::log1p(-w);
  const double num = log_add_exp(lw - theta, l1w - theta * u);
  const double den = log_add_exp(lw, l1w - theta * u);
  return -(num - den) / theta;
}

// ---- Gumbel ----------------------------------------------------------------

struct GumbelTerms {
  double x, y;    // -log u, -log v
  double log_a;   // log A, A = (x^t + y^t)^{1/t}
  double a;
};

GumbelTerms gumbel_terms(double theta, double u, double v) {
  GumbelTerms g;
  g.x = -std::log(u);
  g.y = -std::log(v);
  g.log_a = log_add_exp(theta * std::log(g.x), theta * std::log(g.y)) / theta;
  g.a = std::exp(g.log_a);
  return g;
}

double gumbel_cdf(double theta, double u, double v) { return std::exp(-gumbel_terms(theta, u, v).a); }

double gumbel_log_conditional(double theta, double v, double u) {
  const GumbelTerms g = gumbel_terms(theta, u, v);
  return -g.a + (1.0 - theta) * g.log_a + (theta - 1.0) * std::log(g.x) + g.x;
}

double gumbel_log_density(double theta, double u, double v) {
  const GumbelTerms g = gumbel_terms(theta, u, v);
  return -g.a + g.x + g.y + (theta - 1.0) * (std::log(g.x) + std::log(g.y)) + (1.0 - 2.0 * theta) * g.log_a +
         std::log(g.a + theta - 1.0);
}

double frechet_clamp(double c, double u, double v) {
  return std::clamp(c, std::max(u + v - 1.0, 0.0), std::min(u, v));
}

double frank_tau(double theta) {
  if (std::abs(theta) < 1e-2) {
    const double t2 = theta * theta;
    return theta * (1.0 / 9.0 - t2 / 900.0 + t2 * t2 / 52920.0);
  }
  return 1.0 - 4.0 / theta * (1.0 - debye1(theta));
}

double frank_tau_derivative(double theta) {
  if (std::abs(theta) < 1e-2) return 1.0 / 9.0 - theta * theta / 300.0;
  return 4.0 / (theta * theta) * (1.0 + theta / std::expm1(theta) - 2.0 * debye1(theta));
}

}  // namespace

std::string_view family_name(Family f) noexcept {
  switch (f) {
    case Family::independence: return "independence";
    case Family::clayton: return "clayton";
    case Family::frank: return "frank";
    case Family::gumbel: return "gumbel";
  }
  return "unknown";
}

std::optional<Family> parse_family(std::string_view name) noexcept {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "independence" || lower == "indep" || lower == "product") return Family::independence;
  if (lower == "clayton") return Family::clayton;
  if (lower == "frank") return Family::frank;
  if (lower == "gumbel") return Family::gumbel;
  return std::nullopt;
}

bool theta_in_domain(Family family, double theta) noexcept {
  if (!std::isfinite(theta)) return false;
  switch (family) {
    case Family::independence: return true;
    case Family::clayton: return theta > 0.0;
    case Family::frank: return theta != 0.0;
    case Family::gumbel: return theta >= 1.0;
  }
  return false;
}

CopulaModel::CopulaModel(Family family, double theta)
    : family_(family), theta_(family == Family::independence ? 0.0 : theta) {
  require(theta_in_domain(family, theta),
          "parameter " + fmt_double(theta) + " outside the " + std::string(family_name(family)) + " domain");
}

std::string CopulaModel::label() const {
  if (family_ == Family::independence) return "independence";
  return std::string(family_name(family_)) + "(" + fmt_double(theta_) + ")";
}

double cdf(const CopulaModel& model, double u, double v) {
  check_unit(u, v);
  if (u == 0.0 || v == 0.0) return 0.0;
  if (u == 1.0) return v;
  if (v == 1.0) return u;
  const double t = model.theta();
  double c = 0.0;
  switch (model.family()) {
    case Family::independence: c = u * v; break;
    case Family::clayton: c = clayton_cdf(t, u, v); break;
    case Family::frank: c = t > 0.0 ? frank_pos_cdf(t, u, v) : u - frank_pos_cdf(-t, u, 1.0 - v); break;
    case Family::gumbel: c = gumbel_cdf(t, u, v); break;
  }
  return frechet_clamp(c, u, v);
}

double log_density(const CopulaModel& model, double u, double v) {
  check_interior(u, v);
  const double t = model.theta();
  switch (model.family()) {
    case Family::independence: return 0.0;
    case Family::clayton: return clayton_log_density(t, u, v);
    case Family::frank: return t > 0.0 ? frank_pos_log_density(t, u, v) : frank_pos_log_density(-t, u, 1.0 - v);
    case Family::gumbel: return gumbel_log_density(t, u, v);
  }
  return 0.0;
}

double density(const CopulaModel& model, double u, double v) { return std::exp(log_density(model, u, v)); }

double conditional_cdf(const CopulaModel& model, double v, double given_u) {
  require(given_u > 0.0 && given_u < 1.0, "conditioning value must lie in (0,1), got " + fmt_double(given_u));
  require(v >= 0.0 && v <= 1.0, "conditional_cdf argument must lie in [0,1], got " + fmt_double(v));
  if (v == 0.0) return 0.0;
  if (v == 1.0) return 1.0;
  const double t = model.theta();
  double c = 0.0;
  switch (model.family()) {
    case Family::independence: c = v; break;
    case Family::clayton: c = std::exp(clayton_log_conditional(t, v, given_u)); break;
    case Family::frank:
      c = t > 0.0 ? frank_pos_conditional(t, v, given_u) : 1.0 - frank_pos_conditional(-t, 1.0 - v, given_u);
      break;
    case Family::gumbel: c = std::exp(gumbel_log_conditional(t, v, given_u)); break;
  }
  return std::clamp(c, 0.0, 1.0);
}

double inverse_conditional(const CopulaModel& model, double w, double given_u) {
  require(w > 0.0 && w < 1.0, "inverse_conditional level must lie in (0,1), got " + fmt_double(w));
  require(given_u > 0.0 && given_u < 1.0, "conditioning value must lie in (0,1), got " + fmt_double(given_u));
  const double t = model.theta();
  double v = 0.0;
  switch (model.family()) {
    case Family::independence: v = w; break;
    case Family::clayton: v = clayton_inverse(t, w, given_u); break;
    case Family::frank:
      v = t > 0.0 ? frank_pos_inverse(t, w, given_u) : 1.0 - frank_pos_inverse(-t, 1.0 - w, given_u);
      break;
    case Family::gumbel: {
      const auto f = [&](double x) { return conditional_cdf(model, x, given_u) - w; };
      const auto df = [&](double x) { return density(model, given_u, x); };
      const detail::RootResult r = detail::increasing_root(f, df, kBracketLo, kBracketHi, 0.0);
      if (!r.converged) {
        fail(ErrorCategory::numeric, "conditional inversion did not converge for " + model.label() +
                                         " at w=" + fmt_double(w) + ", u=" + fmt_double(given_u));
      }
      v = r.x;
      break;
    }
  }
  return std::clamp(v, 0.0, 1.0);
}

double kendall_tau(Family family, double theta) {
  if (family == Family::frank && theta == 0.0) return 0.0;
  require(theta_in_domain(family, theta),
          "parameter " + fmt_double(theta) + " outside the " + std::string(family_name(family)) + " domain");
  switch (family) {
    case Family::independence: return 0.0;
    case Family::clayton: return theta / (theta + 2.0);
    case Family::gumbel: return (theta - 1.0) / theta;
    case Family::frank: return frank_tau(theta);
  }
  return 0.0;
}

bool tau_attainable(Family family, double tau) noexcept {
  switch (family) {
    case Family::independence: return false;
    case Family::clayton:
    case Family::gumbel: return tau > 0.0 && tau < 1.0;
    case Family::frank: return tau > -1.0 && tau < 1.0 && tau != 0.0;
  }
  return false;
}

double theta_from_tau(Family family, double tau) {
  require(tau_attainable(family, tau), "Kendall tau " + fmt_double(tau) + " is not attainable by the " +
                                           std::string(family_name(family)) + " family");
  switch (family) {
    case Family::clayton: return 2.0 * tau / (1.0 - tau);
    case Family::gumbel: return 1.0 / (1.0 - tau);
    case Family::frank: break;
    case Family::independence: return 0.0;
  }
  const double target = std::abs(tau);
  double hi = 1.0;
  while (frank_tau(hi) < target) {
    hi *= 2.0;
    if (hi > 1e7) fail(ErrorCategory::numeric, "Kendall tau " + fmt_double(tau) + " too close to 1 for Frank");
  }
  const auto f = [&](double th) { return frank_tau(th) - target; };
  const detail::RootResult r = detail::increasing_root(f, frank_tau_derivative, 0.0, hi, 1e-14);
  if (!r.converged) fail(ErrorCategory::numeric, "Frank tau inversion did not converge");
  return tau < 0.0 ? -r.x : r.x;
}

double debye1(double x) {
  if (x == 0.0) return 1.0;
  if (x < 0.0) return debye1(-x) - x / 2.0;
  const auto integrand = [](double t) { return t == 0.0 ? 1.0 : t / std::expm1(t); };
  // The integrand is below 1e-25 past t = 64.
  const double upper = std::min(x, 64.0);
  double total = 0.0;
  const int pieces = static_cast<int>(std::ceil(upper / 8.0));
  for (int k = 0; k < pieces; ++k) {
    const double a = upper * k / pieces;
    const double b = upper * (k + 1) / pieces;
    total += detail::integrate(integrand, a, b);
  }
  return total / x;
}

}  // namespace copulaband
