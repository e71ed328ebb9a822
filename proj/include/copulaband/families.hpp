#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace copulaband {

enum class Family { independence, clayton, frank, gumbel };

std::string_view family_name(Family f) noexcept;
/// Case-insensitive; nullopt for unknown names.
std::optional<Family> parse_family(std::string_view name) noexcept;

/// A parametric bivariate copula. Parameter domains:
///   Clayton theta > 0, Frank theta != 0, Gumbel theta >= 1, Independence none.
class CopulaModel {
 public:
  /// Throws Error(invalid_argument) for a parameter outside the family domain.
  CopulaModel(Family family, double theta);

  static CopulaModel independence() { return CopulaModel(Family::independence, 0.0); }
  static CopulaModel clayton(double theta) { return CopulaModel(Family::clayton, theta); }
  static CopulaModel frank(double theta) { return CopulaModel(Family::frank, theta); }
  static CopulaModel gumbel(double theta) { return CopulaModel(Family::gumbel, theta); }

  Family family() const noexcept { return family_; }
  double theta() const noexcept { return theta_; }
  std::string label() const;

  friend bool operator==(const CopulaModel&, const CopulaModel&) = default;

 private:
  Family family_;
  double theta_;
};

bool theta_in_domain(Family family, double theta) noexcept;

/// C(u, v). Exact boundary identities C(u,0)=C(0,v)=0, C(u,1)=u, C(1,v)=v.
double cdf(const CopulaModel& model, double u, double v);

/// Mixed partial d^2 C / du dv; requires u, v in (0,1).
double density(const CopulaModel& model, double u, double v);

/// log of density(); finite wherever density() is positive and normal, and
/// more accurate in the tails.
double log_density(const CopulaModel& model, double u, double v);

/// C_2(v | u) = dC/du (u, v); requires given_u in (0,1), v in [0,1].
double conditional_cdf(const CopulaModel& model, double v, double given_u);

/// Solves conditional_cdf(model, v, given_u) = w for v. Closed form for
/// Independence, Clayton and Frank; safeguarded Newton for Gumbel.
/// Throws Error(numeric) if the root search does not converge.
double inverse_conditional(const CopulaModel& model, double w, double given_u);

/// Kendall's tau as a function of the parameter. Frank at theta = 0 is the
/// independence limit 0.
double kendall_tau(Family family, double theta);
inline double tau_from_theta(const CopulaModel& model) { return kendall_tau(model.family(), model.theta()); }

/// Inverse of kendall_tau. Clayton and Gumbel need tau in (0,1), Frank
/// tau in (-1,1) without 0. Independence is rejected (no parameter).
double theta_from_tau(Family family, double tau);

/// Whether theta_from_tau(family, tau) is defined.
bool tau_attainable(Family family, double tau) noexcept;

/// Debye function of order one, D_1(x) = (1/x) \int_0^x t / (e^t - 1) dt,
/// with D_1(0) = 1 and D_1(-x) = D_1(x) + x/2.
double debye1(double x);

}  // namespace copulaband
