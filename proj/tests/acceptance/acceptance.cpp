// One line per acceptance criterion: "criterion <k> PASS|FAIL: <detail>".
// Exit status 0 only if every selected criterion passed.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "copulaband/bands.hpp"
#include "copulaband/cli.hpp"
#include "copulaband/estimator.hpp"
#include "copulaband/families.hpp"
#include "copulaband/fitting.hpp"
#include "copulaband/kernel.hpp"
#include "copulaband/sampler.hpp"
#include "oracle.hpp"
#include "table_points.hpp"

using namespace copulaband;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

PseudoSample draw(const CopulaModel& m, std::size_t n, std::uint64_t seed) {
  SeededStream s(seed);
  return sample_copula(m, n, s);
}

Verdict c1_cdf_spot_checks() {
  constexpr double tol = 1e-3;
  struct Spot {
    CopulaModel m;
    double u, v, want;
  };
  const std::vector<Spot> spots = {
      {CopulaModel::clayton(2), 0.96, 0.29, 0.289}, {CopulaModel::clayton(2), 0.46, 0.42, 0.326},
      {CopulaModel::clayton(2), 0.65, 0.26, 0.248}, {CopulaModel::frank(5), 0.47, 0.38, 0.297},
      {CopulaModel::frank(5), 0.41, 0.47, 0.315},
  };
  double worst = 0.0;
  for (const Spot& s : spots) worst = std::max(worst, std::abs(cdf(s.m, s.u, s.v) - s.want));
  return {worst <= tol, fmt("max |C - printed| = %.2e over %zu points (tol %.0e)", worst, spots.size(), tol)};
}

Verdict c2_tau_inversion() {
  constexpr double tau = 0.408;
  const double clayton = theta_from_tau(Family::clayton, tau);
  const double gumbel = theta_from_tau(Family::gumbel, tau);
  const double frank = theta_from_tau(Family::frank, tau);
  const double frank_err = std::abs(kendall_tau(Family::frank, frank) - tau);
  const bool ok = std::abs(clayton - 1.38) <= 0.01 && std::abs(gumbel - 1.69) <= 0.01 && frank_err <= 1e-6;
  return {ok, fmt("clayton %.4f (1.38 +- 0.01), gumbel %.4f (1.69 +- 0.01), frank %.4f with |tau - 0.408| = %.1e",
                  clayton, gumbel, frank, frank_err)};
}

Verdict c3_kernel_identities() {
  constexpr double tol = 1e-10;
  std::mt19937_64 rng(20260301);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> bw(0.005, 0.5);
  double worst0 = 0.0;
  double worst1 = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double u = unit(rng);
    const double h = bw(rng);
    const LocalKernel kern(u, h);
    const double lo = kern.moments().lo;
    const double hi = kern.moments().hi;
    const double m0 = oracle::quad([&](double t) { return kern.density(t); }, lo, hi);
    const double m1 = oracle::quad([&](double t) { return t * kern.density(t); }, lo, hi);
    worst0 = std::max(worst0, std::abs(m0 - 1.0));
    worst1 = std::max(worst1, std::abs(m1));
  }
  return {worst0 <= tol && worst1 <= tol,
          fmt("max |int k - 1| = %.1e, max |int t k| = %.1e (tol %.0e)", worst0, worst1, tol)};
}

Verdict c4_halfwidth() {
  constexpr std::size_t n = 116;
  const BandParameters params{3.0, 0.0, n};
  const double hw = band_halfwidth(params);
  const auto sample = draw(CopulaModel::clayton(2), n, 4);
  const BandGrid g = confidence_bands(evaluate_grid(sample, 101, BandwidthPolicy::defaults(n)), params);
  std::size_t off = 0;
  for (std::size_t k = 0; k < g.estimate.size(); ++k) {
    if (g.upper[k] - g.lower[k] != 2.0 * g.halfwidth) ++off;
  }
  const bool ok = std::abs(hw - 0.4919) <= 1e-4 && off == 0 && std::abs(g.halfwidth - hw) <= 1e-15;
  return {ok, fmt("E_n = %.6f (0.4919 +- 1e-4); %zu of %zu nodes with upper - lower != 2 E_n", hw, off,
                  g.estimate.size())};
}

Verdict c5_containment() {
  constexpr std::size_t n = 500;
  constexpr int seeds = 20;
  constexpr int needed = 19;
  const BandParameters params{3.0, 0.0, n};
  const BandwidthPolicy policy = BandwidthPolicy::defaults(n);
  std::map<std::pair<int, double>, std::vector<Point>> settings;
  for (const table::Row& r : table::rows()) {
    if (r.f == Family::clayton || r.f == Family::frank) {
      settings[{static_cast<int>(r.f), r.theta}].push_back(Point{r.u, r.v});
    }
  }
  bool ok = settings.size() == 6;
  std::string detail;
  for (const auto& [key, points] : settings) {
    const CopulaModel model(static_cast<Family>(key.first), key.second);
    int good = 0;
    for (int s = 1; s <= seeds; ++s) {
      const auto sample = draw(model, n, static_cast<std::uint64_t>(s));
      bool all = true;
      for (const PointBand& b : point_bands(sample, points, policy, params)) {
        const double c = cdf(model, b.u, b.v);
        all = all && b.lower <= c && c <= b.upper;
      }
      good += all;
    }
    ok = ok && points.size() == 10 && good >= needed;
    detail += fmt("%s %d/%d; ", model.label().c_str(), good, seeds);
  }
  return {ok, detail + fmt("need >= %d/%d each", needed, seeds)};
}

Verdict c6_oracle_equivalence() {
  constexpr std::size_t n = 2000;
  const BandwidthPolicy policy = BandwidthPolicy::defaults(n);
  const double bound = 2.0 * policy.h_max;
  const std::vector<CopulaModel> models = {CopulaModel::independence(), CopulaModel::clayton(2),
                                           CopulaModel::frank(5), CopulaModel::gumbel(1.69)};
  bool ok = true;
  std::string detail;
  std::uint64_t seed = 600;
  for (const CopulaModel& m : models) {
    const auto sample = draw(m, n, ++seed);
    const GridEvaluation g = evaluate_grid(sample, 21, policy);
    double sup = 0.0;
    for (std::size_t i = 0; i < 21; ++i) {
      for (std::size_t j = 0; j < 21; ++j) {
        sup = std::max(sup, std::abs(g.at(i, j) - empirical_copula(sample, g.grid_u[i], g.grid_v[j])));
      }
    }
    ok = ok && sup <= bound;
    detail += fmt("%s %.4f; ", m.label().c_str(), sup);
  }
  return {ok, detail + fmt("bound 2 h_max = %.4f", bound)};
}

Verdict c7_bias_decay() {
  constexpr std::size_t n = 2000;
  constexpr int reps = 400;
  BandwidthPolicy wide = BandwidthPolicy::defaults(n);
  wide.shrink_enabled = false;
  wide.h_min = 1e-6;
  wide.h_max = 0.99;
  BandwidthPolicy narrow = wide;
  narrow.h_n = wide.h_n / 2.0;
  const CopulaModel indep = CopulaModel::independence();
  const double truth = cdf(indep, 0.5, 0.5);
  double bias_wide = 0.0;
  double bias_narrow = 0.0;
  for (int r = 0; r < reps; ++r) {
    const auto sample = draw(indep, n, derive_seed(700, static_cast<std::uint64_t>(r)));
    bias_wide += ll_copula_estimate(sample, 0.5, 0.5, wide) - truth;
    bias_narrow += ll_copula_estimate(sample, 0.5, 0.5, narrow) - truth;
  }
  bias_wide /= reps;
  bias_narrow /= reps;
  const double ratio = std::abs(bias_wide) / std::abs(bias_narrow);
  return {ratio >= 2.5 && ratio <= 6.0,
          fmt("bias(h=%.4f) = %.3e, bias(h/2) = %.3e, ratio %.3f (want [2.5, 6])", wide.h_n, bias_wide, bias_narrow,
              ratio)};
}

Verdict c8_inner_band() {
  constexpr std::size_t n = 1000;
  constexpr int reps = 100;
  const BandParameters params{3.0, 0.99, n};
  const BandwidthPolicy policy = BandwidthPolicy::defaults(n);
  const CopulaModel model = CopulaModel::clayton(2);
  int full = 0;
  for (int r = 0; r < reps; ++r) {
    const auto sample = draw(model, n, derive_seed(800, static_cast<std::uint64_t>(r)));
    const BandGrid g = confidence_bands(evaluate_grid(sample, 101, policy), params, {BandKind::inner});
    full += containment_report(g, model).all();
  }
  const double rate = static_cast<double>(full) / reps;
  return {rate < 0.5, fmt("Delta_n = %.5f, full-grid containment %d/%d = %.2f (want < 0.5)", inner_halfwidth(params),
                          full, reps, rate)};
}

Verdict c9_model_recovery() {
  constexpr std::size_t n = 1000;
  constexpr int runs = 20;
  constexpr int needed = 18;
  const std::vector<CopulaModel> models = {CopulaModel::clayton(2), CopulaModel::gumbel(1.69),
                                           CopulaModel::frank(4.33)};
  const auto families = default_fit_families();
  bool ok = true;
  std::string detail;
  for (const CopulaModel& m : models) {
    int hits = 0;
    for (int r = 0; r < runs; ++r) {
      const auto sim = draw(m, n, derive_seed(900 + static_cast<std::uint64_t>(m.family()), r));
      std::vector<Point> pairs(n);
      for (std::size_t i = 0; i < n; ++i) pairs[i] = Point{sim.u()[i], sim.v()[i]};
      const auto pseudo = to_pseudo_ranks(RawSample(std::move(pairs)));
      hits += fit_families(pseudo, families).selected == m.family();
    }
    ok = ok && hits >= needed;
    detail += fmt("%s %d/%d; ", m.label().c_str(), hits, runs);
  }
  return {ok, detail + fmt("need >= %d/%d each", needed, runs)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Verdict c10_determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "copulaband_acceptance";
  std::filesystem::create_directories(dir);
  const std::string pairs = (dir / "pairs.csv").string();
  const std::string grid = (dir / "bands.csv").string();
  const std::string fit = (dir / "fit.csv").string();
  const std::string svg = (dir / "surface.svg").string();
  const std::string repro = (dir / "reproduce.csv").string();
  const std::vector<std::vector<std::string>> pipeline = {
      {"sample", "--family", "gumbel", "--theta", "1.69", "--n", "500", "--seed", "2024", "--out", pairs},
      {"bands", "--in", pairs, "--grid", "51", "--seed", "2024", "--out", grid},
      {"fit", "--in", pairs, "--out", fit},
      {"plot", "--in", grid, "--fit-from", pairs, "--out", svg},
      {"reproduce", "--family", "clayton", "--n", "500", "--seed", "2024", "--out", repro},
  };
  const std::vector<std::string> outputs = {pairs, grid, fit, svg, repro};
  std::vector<std::string> first;
  bool ok = true;
  for (int pass = 0; pass < 2; ++pass) {
    std::ostringstream out;
    std::ostringstream err;
    for (const auto& args : pipeline) ok = ok && run_cli(args, out, err) == 0;
    for (std::size_t k = 0; k < outputs.size(); ++k) {
      const std::string bytes = slurp(outputs[k]);
      ok = ok && !bytes.empty();
      if (pass == 0) {
        first.push_back(bytes);
        std::filesystem::remove(outputs[k]);
      } else {
        ok = ok && bytes == first[k];
      }
    }
  }
  std::size_t total = 0;
  for (const auto& b : first) total += b.size();
  return {ok, fmt("%zu output files, %zu bytes, identical across two runs", outputs.size(), total)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::vector<int> selected;
  app.add_option("--criterion", selected, "Run only these criteria (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<Verdict()>> checks = {
      c1_cdf_spot_checks, c2_tau_inversion, c3_kernel_identities, c4_halfwidth,      c5_containment,
      c6_oracle_equivalence, c7_bias_decay, c8_inner_band,       c9_model_recovery, c10_determinism,
  };
  if (selected.empty()) {
    for (int k = 1; k <= 10; ++k) selected.push_back(k);
  }
  int failed = 0;
  for (int k : selected) {
    Verdict v;
    try {
      v = checks[static_cast<std::size_t>(k - 1)]();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    failed += !v.pass;
    std::cout << "criterion " << k << (v.pass ? " PASS: " : " FAIL: ") << v.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
