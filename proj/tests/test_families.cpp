#include <doctest.h>

#include <boost/math/tools/roots.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "copulaband/error.hpp"
#include "copulaband/families.hpp"
#include "oracle.hpp"
#include "table_points.hpp"

using namespace copulaband;

namespace {

// Textbook closed forms, written independently of the library and evaluated
// in 50-digit arithmetic so that cancellation cannot hide in the oracle.
double naive_cdf(Family f, double theta, double u_, double v_) {
  using R = boost::multiprecision::cpp_bin_float_50;
  const R t = theta, u = u_, v = v_, one = 1;
  R c;
  switch (f) {
    case Family::independence: c = u * v; break;
    case Family::clayton: c = pow(pow(u, -t) + pow(v, -t) - one, -one / t); break;
    case Family::frank: c = -one / t * log(one + (exp(-t * u) - one) * (exp(-t * v) - one) / (exp(-t) - one)); break;
    case Family::gumbel: c = exp(-pow(pow(-log(u), t) + pow(-log(v), t), one / t)); break;
  }
  return static_cast<double>(c);
}

double debye_oracle(double x) {
  if (x == 0.0) return 1.0;
  if (x < 0.0) return debye_oracle(-x) - x / 2.0;
  if (x < 0.5) {
    const double x2 = x * x;
    return 1.0 - x / 4.0 + x2 / 36.0 - x2 * x2 / 3600.0 + x2 * x2 * x2 / 211680.0 - x2 * x2 * x2 * x2 / 10886400.0;
  }
  double s = std::numbers::pi * std::numbers::pi / 6.0;
  for (int k = 1; k < 2000; ++k) s -= std::exp(-k * x) * (x / k + 1.0 / (double(k) * k));
  return s / x;
}

double frank_tau_oracle(double t) { return 1.0 - 4.0 / t * (1.0 - debye_oracle(t)); }

struct Setting {
  Family f;
  double theta;
};

const std::vector<Setting> kSettings = {
    {Family::independence, 0.0}, {Family::clayton, 0.3}, {Family::clayton, 2.0}, {Family::clayton, 8.0},
    {Family::frank, -6.0},       {Family::frank, -0.7},  {Family::frank, 0.5},   {Family::frank, 5.0},
    {Family::frank, 25.0},       {Family::gumbel, 1.0},  {Family::gumbel, 1.69}, {Family::gumbel, 4.0},
};

}  // namespace

TEST_CASE("domains and names") {
  CHECK_THROWS_AS(CopulaModel::clayton(0.0), Error);
  CHECK_THROWS_AS(CopulaModel::clayton(-0.5), Error);
  CHECK_THROWS_AS(CopulaModel::frank(0.0), Error);
  CHECK_THROWS_AS(CopulaModel::gumbel(0.99), Error);
  CHECK_THROWS_AS(CopulaModel::clayton(NAN), Error);
  CHECK_NOTHROW(CopulaModel::gumbel(1.0));
  CHECK_NOTHROW(CopulaModel::frank(-3.0));
  CHECK(parse_family("Clayton") == Family::clayton);
  CHECK(parse_family("FRANK") == Family::frank);
  CHECK(parse_family("gumbel") == Family::gumbel);
  CHECK(parse_family("independence") == Family::independence);
  CHECK_FALSE(parse_family("joe").has_value());
  CHECK(family_name(Family::frank) == "frank");
  CHECK(CopulaModel::clayton(2.0).label() == "clayton(2)");
}

TEST_CASE("cdf against published spot values") {
  for (const table::Row& r : table::rows()) {
    const double c = cdf(CopulaModel(r.f, r.theta), r.u, r.v);
    CAPTURE(r.theta);
    CAPTURE(r.u);
    CAPTURE(r.v);
    CHECK(std::abs(c - r.printed) <= 0.001);
  }
}

TEST_CASE("cdf agrees with the textbook formulas") {
  for (const Setting& s : kSettings) {
    const CopulaModel m(s.f, s.theta);
    for (double u = 0.05; u < 1.0; u += 0.1) {
      for (double v = 0.05; v < 1.0; v += 0.1) {
        CAPTURE(m.label());
        CAPTURE(u);
        CAPTURE(v);
        CHECK(cdf(m, u, v) == doctest::Approx(naive_cdf(s.f, s.theta, u, v)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("boundary identities") {
  for (const Setting& s : kSettings) {
    const CopulaModel m(s.f, s.theta);
    for (double t = 0.0; t <= 1.0; t += 0.125) {
      CHECK(cdf(m, t, 0.0) == 0.0);
      CHECK(cdf(m, 0.0, t) == 0.0);
      CHECK(cdf(m, t, 1.0) == t);
      CHECK(cdf(m, 1.0, t) == t);
    }
  }
}

TEST_CASE("Frechet-Hoeffding bounds and 2-increasing rectangles") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, kSettings.size() - 1);
  for (int i = 0; i < 10000; ++i) {
    const Setting& s = kSettings[pick(rng)];
    const CopulaModel m(s.f, s.theta);
    const double u = U(rng), v = U(rng);
    const double c = cdf(m, u, v);
    CHECK(c >= std::max(u + v - 1.0, 0.0) - 1e-15);
    CHECK(c <= std::min(u, v) + 1e-15);

    double u1 = U(rng), u2 = U(rng), v1 = U(rng), v2 = U(rng);
    if (u1 > u2) std::swap(u1, u2);
    if (v1 > v2) std::swap(v1, v2);
    CHECK(cdf(m, u2, v2) - cdf(m, u2, v1) - cdf(m, u1, v2) + cdf(m, u1, v1) >= -1e-14);
  }
}

TEST_CASE("extreme parameters stay finite and inside the bounds") {
  const std::vector<Setting> extreme = {{Family::clayton, 1e-8}, {Family::clayton, 80.0}, {Family::frank, 700.0},
                                        {Family::frank, -700.0}, {Family::frank, 1e-9},   {Family::gumbel, 60.0}};
  for (const Setting& s : extreme) {
    const CopulaModel m(s.f, s.theta);
    for (double u : {1e-12, 1e-6, 0.01, 0.3, 0.5, 0.77, 0.999, 1 - 1e-12}) {
      for (double v : {1e-12, 1e-6, 0.01, 0.3, 0.5, 0.77, 0.999, 1 - 1e-12}) {
        const double c = cdf(m, u, v);
        REQUIRE(std::isfinite(c));
        CHECK(c >= std::max(u + v - 1.0, 0.0) - 1e-12);
        CHECK(c <= std::min(u, v) + 1e-12);
        const double w = conditional_cdf(m, v, u);
        REQUIRE(std::isfinite(w));
        CHECK(w >= 0.0);
        CHECK(w <= 1.0);
        CHECK(std::isfinite(log_density(m, u, v)));
      }
    }
  }
}

TEST_CASE("small parameters reduce to independence") {
  for (double u : {0.1, 0.35, 0.5, 0.8, 0.97}) {
    for (double v : {0.05, 0.4, 0.6, 0.9}) {
      CHECK(std::abs(cdf(CopulaModel::frank(1e-6), u, v) - u * v) < 1e-6);
      CHECK(std::abs(cdf(CopulaModel::frank(-1e-6), u, v) - u * v) < 1e-6);
      CHECK(std::abs(cdf(CopulaModel::clayton(1e-6), u, v) - u * v) < 1e-6);
      CHECK(std::abs(cdf(CopulaModel::gumbel(1.0), u, v) - u * v) < 1e-15);
    }
  }
}

TEST_CASE("density against finite differences of the cdf") {
  const auto fd = [](const CopulaModel& m, double u, double v) {
    const double e = 1e-4;
    return (cdf(m, u + e, v + e) - cdf(m, u + e, v - e) - cdf(m, u - e, v + e) + cdf(m, u - e, v - e)) / (4 * e * e);
  };
  CHECK(density(CopulaModel::independence(), 0.3, 0.9) == 1.0);
  CHECK(density(CopulaModel::clayton(2.0), 0.5, 0.5) == doctest::Approx(fd(CopulaModel::clayton(2.0), 0.5, 0.5)).epsilon(1e-5));
  CHECK(density(CopulaModel::frank(5.0), 0.3, 0.8) == doctest::Approx(fd(CopulaModel::frank(5.0), 0.3, 0.8)).epsilon(1e-5));
  for (const Setting& s : kSettings) {
    const CopulaModel m(s.f, s.theta);
    for (double u = 0.1; u < 0.95; u += 0.2) {
      for (double v = 0.1; v < 0.95; v += 0.2) {
        CHECK(density(m, u, v) == doctest::Approx(fd(m, u, v)).epsilon(1e-4));
        CHECK(std::log(density(m, u, v)) == doctest::Approx(log_density(m, u, v)).epsilon(1e-12));
      }
    }
  }
  CHECK_THROWS_AS(density(CopulaModel::clayton(2.0), 0.0, 0.5), Error);
  CHECK_THROWS_AS(density(CopulaModel::clayton(2.0), 0.5, 1.0), Error);
}

TEST_CASE("density integrates to one") {
  const std::vector<Setting> s2 = {{Family::clayton, 0.8}, {Family::clayton, 3.0}, {Family::frank, -4.0},
                                   {Family::frank, 8.0},   {Family::gumbel, 1.5},  {Family::gumbel, 3.0}};
  for (const Setting& s : s2) {
    const CopulaModel m(s.f, s.theta);
    // Tensor Gauss-Kronrod; the outer integrand is the inner quadrature.
    const double total = oracle::quad_loose(
        [&](double u) {
          return oracle::quad_loose([&](double v) { return density(m, u, v); }, 1e-12, 1 - 1e-12, 1e-7);
        },
        1e-12, 1 - 1e-12, 1e-6);
    CAPTURE(m.label());
    CHECK(std::abs(total - 1.0) < 1e-3);
  }
}

TEST_CASE("conditional cdf") {
  const double expected = 8.0 * std::pow(7.0, -1.5);
  CHECK(conditional_cdf(CopulaModel::clayton(2.0), 0.5, 0.5) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(expected == doctest::Approx(0.4320).epsilon(1e-4));
  CHECK(conditional_cdf(CopulaModel::independence(), 0.37, 0.8) == 0.37);
  CHECK_THROWS_AS(conditional_cdf(CopulaModel::clayton(2.0), 0.5, 0.0), Error);
  CHECK_THROWS_AS(conditional_cdf(CopulaModel::clayton(2.0), 0.5, 1.0), Error);

  for (const Setting& s : kSettings) {
    const CopulaModel m(s.f, s.theta);
    for (double u = 0.05; u < 1.0; u += 0.15) {
      CHECK(std::abs(conditional_cdf(m, 0.0, u)) <= 1e-9);
      CHECK(std::abs(conditional_cdf(m, 1.0, u) - 1.0) <= 1e-9);
      double prev = -1.0;
      for (double v = 0.0; v <= 1.0; v += 0.01) {
        const double w = conditional_cdf(m, v, u);
        CHECK(w >= prev - 1e-15);
        prev = w;
        if (v > 0.0 && v < 1.0) {
          const double e = 1e-6;
          const double fd = (cdf(m, u + e, v) - cdf(m, u - e, v)) / (2 * e);
          CHECK(std::abs(w - fd) < 1e-5);
        }
      }
    }
  }
}

TEST_CASE("inverse conditional") {
  CHECK(inverse_conditional(CopulaModel::independence(), 0.3, 0.77) == 0.3);
  CHECK(inverse_conditional(CopulaModel::clayton(2.0), 8.0 * std::pow(7.0, -1.5), 0.5) ==
        doctest::Approx(0.5).epsilon(1e-10));
  CHECK(std::abs(inverse_conditional(CopulaModel::clayton(2.0), 0.4320, 0.5) - 0.5) < 1e-4);

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<Setting> all = kSettings;
  all.push_back({Family::frank, 300.0});
  all.push_back({Family::frank, -300.0});
  all.push_back({Family::clayton, 40.0});
  all.push_back({Family::gumbel, 20.0});
  for (const Setting& s : all) {
    const CopulaModel m(s.f, s.theta);
    for (int i = 0; i < 400; ++i) {
      const double u = 0.001 + 0.998 * U(rng);
      const double v = 0.001 + 0.998 * U(rng);
      const double w = conditional_cdf(m, v, u);
      if (w <= 1e-12 || w >= 1 - 1e-12) continue;  // v is not identifiable from w at double precision
      const double back = inverse_conditional(m, w, u);
      CAPTURE(m.label());
      CAPTURE(u);
      CAPTURE(v);
      CHECK(std::abs(conditional_cdf(m, back, u) - w) < 1e-10);
      // v is recoverable only as far as the conditional cdf moves with it.
      if (density(m, u, v) > 1e-3) CHECK(std::abs(back - v) < 1e-8);
    }
  }
}

TEST_CASE("debye function") {
  CHECK(debye1(0.0) == 1.0);
  CHECK(debye1(1e-10) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(debye1(1.0) == doctest::Approx(0.7775).epsilon(1e-4));
  const double q1 = oracle::quad([](double t) { return t == 0.0 ? 1.0 : t / std::expm1(t); }, 0.0, 1.0);
  CHECK(std::abs(debye1(1.0) - q1) < 1e-13);
  CHECK(std::abs(debye1(50.0) / (std::numbers::pi * std::numbers::pi / 300.0) - 1.0) < 0.01);
  for (double x = -80.0; x <= 200.0; x += 0.37) {
    CAPTURE(x);
    CHECK(debye1(x) == doctest::Approx(debye_oracle(x)).epsilon(1e-12));
  }
  for (double x : {0.1, 0.5, 2.0, 7.5, 33.0}) CHECK(debye1(-x) == doctest::Approx(debye1(x) + x / 2).epsilon(1e-14));
}

TEST_CASE("kendall tau from theta") {
  CHECK(tau_from_theta(CopulaModel::clayton(2.0)) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(tau_from_theta(CopulaModel::gumbel(1.0)) == 0.0);
  CHECK(tau_from_theta(CopulaModel::gumbel(1.69)) == doctest::Approx(0.69 / 1.69).epsilon(1e-15));
  CHECK(kendall_tau(Family::frank, 0.0) == 0.0);
  CHECK(tau_from_theta(CopulaModel::frank(4.33)) == doctest::Approx(frank_tau_oracle(4.33)).epsilon(1e-12));
  CHECK(tau_from_theta(CopulaModel::frank(4.33)) == doctest::Approx(0.41209).epsilon(1e-4));
  for (double t : {-40.0, -3.0, -0.01, 1e-5, 0.2, 1.0, 9.0, 60.0}) {
    CHECK(kendall_tau(Family::frank, t) == doctest::Approx(frank_tau_oracle(t)).epsilon(1e-10));
  }
  CHECK(kendall_tau(Family::frank, -2.0) == doctest::Approx(-kendall_tau(Family::frank, 2.0)).epsilon(1e-14));
}

TEST_CASE("theta from tau") {
  CHECK(theta_from_tau(Family::clayton, 0.408) == doctest::Approx(1.38).epsilon(0.01 / 1.38));
  CHECK(std::abs(theta_from_tau(Family::clayton, 0.408) - 1.38) <= 0.01);
  CHECK(std::abs(theta_from_tau(Family::gumbel, 0.408) - 1.69) <= 0.01);

  // Independent root of the oracle tau curve.
  boost::math::tools::eps_tolerance<double> tol(50);
  const auto [a, b] = boost::math::tools::bisect([](double t) { return frank_tau_oracle(t) - 0.408; }, 1.0, 10.0, tol);
  const double frank = theta_from_tau(Family::frank, 0.408);
  CHECK(frank == doctest::Approx(0.5 * (a + b)).epsilon(1e-9));
  CHECK(frank == doctest::Approx(4.2723).epsilon(1e-4));
  CHECK(frank > 0.0);

  CHECK_THROWS_AS(theta_from_tau(Family::clayton, -0.1), Error);
  CHECK_THROWS_AS(theta_from_tau(Family::gumbel, 0.0), Error);
  CHECK_THROWS_AS(theta_from_tau(Family::frank, 0.0), Error);
  CHECK_THROWS_AS(theta_from_tau(Family::frank, 1.0), Error);
  CHECK_THROWS_AS(theta_from_tau(Family::independence, 0.2), Error);
  CHECK(tau_attainable(Family::frank, -0.5));
  CHECK_FALSE(tau_attainable(Family::clayton, -0.5));
  CHECK_FALSE(tau_attainable(Family::gumbel, 1.0));
}

TEST_CASE("tau round trip across each family's range") {
  for (double tau = -0.98; tau <= 0.98; tau += 0.01) {
    if (std::abs(tau) < 1e-9) continue;
    for (Family f : {Family::clayton, Family::frank, Family::gumbel}) {
      if (!tau_attainable(f, tau)) continue;
      CAPTURE(tau);
      CHECK(std::abs(kendall_tau(f, theta_from_tau(f, tau)) - tau) < 1e-8);
    }
  }
  for (double tau : {1e-6, -1e-6, 0.999, -0.999}) {
    CHECK(std::abs(kendall_tau(Family::frank, theta_from_tau(Family::frank, tau)) - tau) < 1e-8);
  }
}
