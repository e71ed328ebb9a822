#include "copulaband/cli.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <ostream>

#include <CLI11.hpp>

#include "copulaband/bands.hpp"
#include "copulaband/error.hpp"
#include "copulaband/estimator.hpp"
#include "copulaband/fitting.hpp"
#include "copulaband/plot.hpp"
#include "copulaband/sampler.hpp"

namespace copulaband {
namespace {

constexpr std::array<std::string_view, 6> kCommands = {"sample", "estimate", "bands", "fit", "plot", "reproduce"};
constexpr std::size_t kReproducePoints = 10;

bool uses(const RunConfig& c, std::initializer_list<std::string_view> commands) {
  return std::find(commands.begin(), commands.end(), c.command) != commands.end();
}

std::optional<Transform> parse_transform(std::string_view s) {
  for (Transform t : {Transform::identity, Transform::rank, Transform::smoothed}) {
    if (transform_name(t) == s) return t;
  }
  return std::nullopt;
}

std::optional<CopulaModel> parse_overlay(std::string_view spec, std::string* why) {
  const auto colon = spec.find(':');
  const auto fam = parse_family(spec.substr(0, colon));
  if (!fam) {
    *why = "unknown family in overlay '" + std::string(spec) + "'";
    return std::nullopt;
  }
  double theta = 0.0;
  if (colon != std::string_view::npos) {
    const auto t = parse_double(spec.substr(colon + 1));
    if (!t) {
      *why = "bad theta in overlay '" + std::string(spec) + "'";
      return std::nullopt;
    }
    theta = *t;
  } else if (*fam != Family::independence) {
    *why = "overlay '" + std::string(spec) + "' needs family:theta";
    return std::nullopt;
  }
  if (!theta_in_domain(*fam, theta)) {
    *why = "overlay '" + std::string(spec) + "' has theta outside the family domain";
    return std::nullopt;
  }
  return CopulaModel(*fam, theta);
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += sep;
    s += parts[i];
  }
  return s;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  if (s.empty()) return parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

const std::string& meta_get(const Metadata& meta, const std::string& key) {
  const auto it = meta.find(key);
  if (it == meta.end()) fail(ErrorCategory::input, "metadata is missing " + key);
  return it->second;
}

double meta_double(const Metadata& meta, const std::string& key) {
  const auto v = parse_double(meta_get(meta, key));
  if (!v) fail(ErrorCategory::input, "metadata " + key + " is not a number");
  return *v;
}

std::uint64_t meta_uint(const Metadata& meta, const std::string& key) {
  const std::string& s = meta_get(meta, key);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) fail(ErrorCategory::input, "metadata " + key + " is not an integer");
  return v;
}

BandwidthPolicy make_policy(const RunConfig& cfg, std::size_t n) {
  BandwidthPolicy p = BandwidthPolicy::defaults(n);
  p.alpha = cfg.alpha;
  if (cfg.h_n) p.h_n = *cfg.h_n;
  p.validate();
  return p;
}

void add_policy(Metadata& meta, const BandwidthPolicy& p, std::size_t n) {
  meta["n"] = std::to_string(n);
  meta["h_n"] = format_double(p.h_n);
  meta["alpha"] = format_double(p.alpha);
  meta["h_min"] = format_double(p.h_min);
  meta["h_max"] = format_double(p.h_max);
  meta["shrink"] = p.shrink_enabled ? "1" : "0";
  meta["reading"] = std::string(reading_name(p.reading));
}

PseudoSample load_pseudo(const RunConfig& cfg, const std::string& path, std::ostream& out) {
  const PairsCsv csv = read_pairs_csv(path);
  out << "read " << csv.sample.size() << " rows from " << path;
  if (csv.blank_lines) out << " (" << csv.blank_lines << " blank lines skipped)";
  out << '\n';
  return to_pseudo(csv.sample, cfg.transform);
}

int cmd_sample(const RunConfig& cfg, std::ostream& out) {
  const CopulaModel model(*cfg.family, cfg.theta.value_or(0.0));
  SeededStream stream(cfg.seed);
  const PseudoSample sample = sample_copula(model, cfg.n, stream);
  Metadata meta = to_metadata(cfg);
  meta["model"] = model.label();
  meta["n"] = std::to_string(cfg.n);
  meta["seed"] = std::to_string(cfg.seed);
  meta["rng"] = std::string(SeededStream::algorithm_tag);
  write_pairs_csv(cfg.out, sample, meta);
  out << "wrote " << cfg.n << " pairs from " << model.label() << " to " << cfg.out << '\n';
  return 0;
}

int cmd_grid(const RunConfig& cfg, std::ostream& out, bool with_bands) {
  const PseudoSample sample = load_pseudo(cfg, cfg.in, out);
  const BandwidthPolicy policy = make_policy(cfg, sample.size());
  Metadata meta = to_metadata(cfg);
  add_policy(meta, policy, sample.size());
  meta["seed"] = std::to_string(cfg.seed);
  meta["transform"] = std::string(transform_name(sample.transform()));
  BandParameters params{cfg.a_c, cfg.epsilon, sample.size()};
  if (with_bands) params.validate();
  const GridEvaluation eval = evaluate_grid(sample, cfg.grid_size, policy);
  BandGrid grid;
  if (with_bands) {
    grid = confidence_bands(eval, params, {BandKind::outer, cfg.clip});
    meta["A_c"] = format_double(cfg.a_c);
    meta["epsilon"] = format_double(cfg.epsilon);
    meta["clip"] = cfg.clip ? "1" : "0";
  } else {
    grid.grid_u = eval.grid_u;
    grid.grid_v = eval.grid_v;
    grid.estimate = eval.values;
    grid.lower = eval.values;
    grid.upper = eval.values;
  }
  write_grid_csv(cfg.out, grid, meta);
  out << "wrote " << cfg.grid_size << "x" << cfg.grid_size << " grid";
  if (with_bands) out << " with half-width " << format_double(grid.halfwidth);
  out << " to " << cfg.out << '\n';
  return 0;
}

int cmd_fit(const RunConfig& cfg, std::ostream& out) {
  const PseudoSample sample = load_pseudo(cfg, cfg.in, out);
  const auto families = default_fit_families();
  const FitReport report = fit_families(sample, families);
  std::string csv = "rank,family,applicable,theta,log_likelihood,floored\n";
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const FitRow& r = report.rows[i];
    csv += std::to_string(i + 1) + "," + std::string(family_name(r.family)) + "," + (r.applicable ? "1" : "0") + "," +
           format_double(r.theta) + "," + format_double(r.log_likelihood) + "," + std::to_string(r.floored) + "\n";
    out << "  " << family_name(r.family);
    if (r.applicable) {
      out << " theta=" << format_double(r.theta) << " loglik=" << format_double(r.log_likelihood) << '\n';
    } else {
      out << " not applicable\n";
    }
  }
  Metadata meta = to_metadata(cfg);
  meta["n"] = std::to_string(sample.size());
  meta["tau_hat"] = format_double(report.tau_hat);
  meta["selected"] = std::string(family_name(report.selected));
  meta["transform"] = std::string(transform_name(sample.transform()));
  csv += format_metadata(meta);
  write_file_atomic(cfg.out, csv);
  out << "tau_hat=" << format_double(report.tau_hat) << " selected " << family_name(report.selected) << '\n';
  return 0;
}

int cmd_plot(const RunConfig& cfg, std::ostream& out) {
  const GridFile file = read_grid_csv(cfg.in);
  SurfacePlotOptions opts;
  std::string why;
  for (const std::string& spec : cfg.overlays) opts.overlays.push_back(*parse_overlay(spec, &why));
  if (!cfg.fit_from.empty()) {
    const PseudoSample sample = load_pseudo(cfg, cfg.fit_from, out);
    const auto families = default_fit_families();
    const FitReport report = fit_families(sample, families);
    for (const FitRow& r : report.rows) {
      if (r.applicable && opts.overlays.size() < 3) opts.overlays.emplace_back(r.family, r.theta);
    }
  }
  if (const auto it = file.metadata.find("n"); it != file.metadata.end()) {
    opts.title += " (n = " + it->second + ")";
  }
  opts.metadata = to_metadata(cfg);
  write_surface_svg(cfg.out, file.grid, opts);
  out << "wrote " << cfg.out << " with " << opts.overlays.size() << " overlays\n";
  return 0;
}

int cmd_reproduce(const RunConfig& cfg, std::ostream& out) {
  const Family family = *cfg.family;
  const std::vector<double> thetas = cfg.thetas.empty() ? reproduce_thetas(family) : cfg.thetas;
  const SeededStream master(cfg.seed);
  const BandwidthPolicy policy = make_policy(cfg, cfg.n);
  const BandParameters params{cfg.a_c, cfg.epsilon, cfg.n};
  params.validate();

  std::string csv = "family,theta,u,v,lower,C,upper,verdict\n";
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    const CopulaModel model(family, thetas[k]);
    SeededStream stream = master.split(k);
    const PseudoSample sample = sample_copula(model, cfg.n, stream);
    std::vector<Point> points(kReproducePoints);
    for (Point& p : points) {
      p.x = stream.uniform();
      p.y = stream.uniform();
    }
    std::size_t contained = 0;
    for (const PointBand& b : point_bands(sample, points, policy, params)) {
      const double c = cdf(model, b.u, b.v);
      const bool inside = b.lower <= c && c <= b.upper;
      contained += inside;
      csv += std::string(family_name(family)) + "," + format_double(thetas[k]) + "," + format_double(b.u) + "," +
             format_double(b.v) + "," + format_double(b.lower) + "," + format_double(c) + "," +
             format_double(b.upper) + "," + (inside ? "contained" : "outside") + "\n";
    }
    out << model.label() << ": " << contained << "/" << kReproducePoints << " contained\n";
  }
  Metadata meta = to_metadata(cfg);
  add_policy(meta, policy, cfg.n);
  meta["seed"] = std::to_string(cfg.seed);
  meta["rng"] = std::string(SeededStream::algorithm_tag);
  meta["A_c"] = format_double(cfg.a_c);
  meta["epsilon"] = format_double(cfg.epsilon);
  meta["halfwidth"] = format_double(band_halfwidth(params));
  meta["sample_transform"] = std::string(transform_name(Transform::identity));
  csv += format_metadata(meta);
  write_file_atomic(cfg.out, csv);
  return 0;
}

}  // namespace

std::vector<double> reproduce_thetas(Family family) {
  switch (family) {
    case Family::clayton: return {0.5, 2.0, 6.0};
    case Family::frank: return {-2.0, 5.0, 18.0};
    default: fail(ErrorCategory::config, "reproduce supports clayton and frank only");
  }
}

std::vector<std::string> validation_errors(const RunConfig& c) {
  std::vector<std::string> errs;
  if (std::find(kCommands.begin(), kCommands.end(), c.command) == kCommands.end()) {
    errs.push_back("unknown command '" + c.command + "'");
    return errs;
  }
  if (uses(c, {"sample", "reproduce"}) && !c.family) errs.push_back("--family is required");
  if (c.command == "sample" && c.family) {
    if (*c.family == Family::independence) {
      if (c.theta && *c.theta != 0.0) errs.push_back("independence takes no --theta");
    } else if (!c.theta) {
      errs.push_back("--theta is required for " + std::string(family_name(*c.family)));
    } else if (!theta_in_domain(*c.family, *c.theta)) {
      errs.push_back("--theta " + format_double(*c.theta) + " is outside the " +
                     std::string(family_name(*c.family)) + " domain");
    }
  }
  if (c.command == "reproduce" && c.family) {
    if (*c.family != Family::clayton && *c.family != Family::frank) {
      errs.push_back("reproduce supports --family clayton or frank");
    } else {
      for (double t : c.thetas) {
        if (!theta_in_domain(*c.family, t)) errs.push_back("--thetas entry " + format_double(t) + " is outside the domain");
      }
    }
  }
  if (c.command == "sample" && c.n < 2) errs.push_back("--n must be at least 2");
  if (c.command == "reproduce" && c.n < 16) errs.push_back("--n must be at least 16 for bands");
  if (uses(c, {"estimate", "bands"}) && c.grid_size < 2) errs.push_back("--grid must be at least 2");
  if (!(c.alpha > 0.0) || !std::isfinite(c.alpha)) errs.push_back("--alpha must be positive");
  if (c.h_n && (!(*c.h_n > 0.0) || !(*c.h_n < 1.0))) errs.push_back("--hn must lie in (0,1)");
  if (!(c.a_c > 0.0 && c.a_c <= 3.0)) errs.push_back("--Ac must lie in (0,3]");
  if (!(c.epsilon >= 0.0) || !std::isfinite(c.epsilon)) errs.push_back("--epsilon must be nonnegative");
  if (uses(c, {"estimate", "bands", "fit", "plot"}) && c.in.empty()) errs.push_back("--in is required");
  if (c.out.empty()) errs.push_back("--out is required");
  if (c.overlays.size() > 3) errs.push_back("at most 3 --overlay entries");
  for (const std::string& spec : c.overlays) {
    std::string why;
    if (!parse_overlay(spec, &why)) errs.push_back(why);
  }
  return errs;
}

void validate(const RunConfig& cfg) {
  const auto errs = validation_errors(cfg);
  if (!errs.empty()) fail(ErrorCategory::config, join(errs, "; "));
}

Metadata to_metadata(const RunConfig& c) {
  Metadata m;
  m["config.command"] = c.command;
  m["config.family"] = c.family ? std::string(family_name(*c.family)) : "";
  m["config.theta"] = c.theta ? format_double(*c.theta) : "";
  std::vector<std::string> thetas;
  for (double t : c.thetas) thetas.push_back(format_double(t));
  m["config.thetas"] = join(thetas, ";");
  m["config.n"] = std::to_string(c.n);
  m["config.seed"] = std::to_string(c.seed);
  m["config.grid"] = std::to_string(c.grid_size);
  m["config.alpha"] = format_double(c.alpha);
  m["config.hn"] = c.h_n ? format_double(*c.h_n) : "auto";
  m["config.Ac"] = format_double(c.a_c);
  m["config.epsilon"] = format_double(c.epsilon);
  m["config.transform"] = std::string(transform_name(c.transform));
  m["config.clip"] = c.clip ? "1" : "0";
  m["config.in"] = c.in;
  m["config.out"] = c.out;
  m["config.overlays"] = join(c.overlays, ";");
  m["config.fit_from"] = c.fit_from;
  return m;
}

RunConfig from_metadata(const Metadata& m) {
  RunConfig c;
  c.command = meta_get(m, "config.command");
  if (const std::string& f = meta_get(m, "config.family"); !f.empty()) {
    c.family = parse_family(f);
    if (!c.family) fail(ErrorCategory::input, "metadata config.family '" + f + "' is unknown");
  }
  if (!meta_get(m, "config.theta").empty()) c.theta = meta_double(m, "config.theta");
  for (const std::string& t : split(meta_get(m, "config.thetas"), ';')) {
    const auto v = parse_double(t);
    if (!v) fail(ErrorCategory::input, "metadata config.thetas is malformed");
    c.thetas.push_back(*v);
  }
  c.n = meta_uint(m, "config.n");
  c.seed = meta_uint(m, "config.seed");
  c.grid_size = meta_uint(m, "config.grid");
  c.alpha = meta_double(m, "config.alpha");
  if (meta_get(m, "config.hn") != "auto") c.h_n = meta_double(m, "config.hn");
  c.a_c = meta_double(m, "config.Ac");
  c.epsilon = meta_double(m, "config.epsilon");
  const auto t = parse_transform(meta_get(m, "config.transform"));
  if (!t) fail(ErrorCategory::input, "metadata config.transform is unknown");
  c.transform = *t;
  const std::string& clip = meta_get(m, "config.clip");
  if (clip != "0" && clip != "1") fail(ErrorCategory::input, "metadata config.clip must be 0 or 1");
  c.clip = clip == "1";
  c.in = meta_get(m, "config.in");
  c.out = meta_get(m, "config.out");
  c.overlays = split(meta_get(m, "config.overlays"), ';');
  c.fit_from = meta_get(m, "config.fit_from");
  return c;
}

int exit_code(ErrorCategory c) noexcept {
  switch (c) {
    case ErrorCategory::invalid_argument: return 3;
    case ErrorCategory::config: return 4;
    case ErrorCategory::input: return 5;
    case ErrorCategory::io: return 6;
    case ErrorCategory::numeric: return 7;
  }
  return 1;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Local-linear copula estimation with simultaneous confidence bands", "copulaband"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string family;
  std::string transform = "rank";
  double theta = 0.0;
  double hn = 0.0;
  std::vector<CLI::Option*> theta_opts;
  std::vector<CLI::Option*> hn_opts;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "Master seed for all randomness");
    sub->add_option("--out", cfg.out, "Output file");
  };
  const auto smoothing = [&](CLI::App* sub) {
    sub->add_option("--in", cfg.in, "Input pairs CSV");
    sub->add_option("--grid", cfg.grid_size, "Grid nodes per axis");
    sub->add_option("--alpha", cfg.alpha, "Shrinkage exponent");
    hn_opts.push_back(sub->add_option("--hn", hn, "Global bandwidth (default 1/log n)"));
    sub->add_option("--transform", transform, "Margin transform")->check(CLI::IsMember({"rank", "smoothed", "identity"}));
  };
  const auto banding = [&](CLI::App* sub) {
    sub->add_option("--Ac", cfg.a_c, "Band constant A(c)");
    sub->add_option("--epsilon", cfg.epsilon, "Band inflation");
    sub->add_flag("--clip", cfg.clip, "Pull bounds inside the Frechet-Hoeffding envelope");
  };

  CLI::App* sample = app.add_subcommand("sample", "Simulate a parametric copula sample");
  common(sample);
  sample->add_option("--family", family, "clayton | frank | gumbel | independence");
  theta_opts.push_back(sample->add_option("--theta", theta, "Copula parameter"));
  sample->add_option("--n", cfg.n, "Sample size");

  CLI::App* estimate = app.add_subcommand("estimate", "Local-linear estimate on a grid");
  common(estimate);
  smoothing(estimate);

  CLI::App* bands = app.add_subcommand("bands", "Estimate with simultaneous confidence bands");
  common(bands);
  smoothing(bands);
  banding(bands);

  CLI::App* fit = app.add_subcommand("fit", "Fit parametric families by Kendall tau inversion");
  common(fit);
  fit->add_option("--in", cfg.in, "Input pairs CSV");
  fit->add_option("--transform", transform, "Margin transform")->check(CLI::IsMember({"rank", "smoothed", "identity"}));

  CLI::App* plot = app.add_subcommand("plot", "Render a grid file as SVG");
  common(plot);
  plot->add_option("--in", cfg.in, "Grid CSV from estimate or bands");
  plot->add_option("--overlay", cfg.overlays, "Parametric overlay family:theta (up to 3)");
  plot->add_option("--fit-from", cfg.fit_from, "Overlay the families fitted to this pairs CSV");
  plot->add_option("--transform", transform, "Margin transform for --fit-from")
      ->check(CLI::IsMember({"rank", "smoothed", "identity"}));

  CLI::App* reproduce = app.add_subcommand("reproduce", "Band containment at random points for a theta list");
  common(reproduce);
  reproduce->add_option("--family", family, "clayton | frank");
  reproduce->add_option("--thetas", cfg.thetas, "Parameters (default: family list)")->delimiter(',');
  reproduce->add_option("--n", cfg.n, "Sample size");
  reproduce->add_option("--alpha", cfg.alpha, "Shrinkage exponent");
  hn_opts.push_back(reproduce->add_option("--hn", hn, "Global bandwidth (default 1/log n)"));
  banding(reproduce);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    err << "error[usage]: " << e.what() << '\n';
    return 2;
  }

  try {
    cfg.command = app.get_subcommands().front()->get_name();
    std::vector<std::string> errs;
    if (!family.empty()) {
      cfg.family = parse_family(family);
      if (!cfg.family) errs.push_back("unknown family '" + family + "'");
    }
    for (CLI::Option* o : theta_opts) {
      if (o->count()) cfg.theta = theta;
    }
    for (CLI::Option* o : hn_opts) {
      if (o->count()) cfg.h_n = hn;
    }
    cfg.transform = *parse_transform(transform);
    for (auto& e : validation_errors(cfg)) {
      if (!(e == "--family is required" && !family.empty())) errs.push_back(std::move(e));
    }
    if (!errs.empty()) fail(ErrorCategory::config, join(errs, "; "));

    if (cfg.command == "sample") return cmd_sample(cfg, out);
    if (cfg.command == "estimate") return cmd_grid(cfg, out, false);
    if (cfg.command == "bands") return cmd_grid(cfg, out, true);
    if (cfg.command == "fit") return cmd_fit(cfg, out);
    if (cfg.command == "plot") return cmd_plot(cfg, out);
    return cmd_reproduce(cfg, out);
  } catch (const Error& e) {
    err << "error[" << category_name(e.category()) << "]: " << e.what() << '\n';
    return exit_code(e.category());
  } catch (const std::exception& e) {
    err << "error[internal]: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace copulaband
