#include "copulaband/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "copulaband/error.hpp"
#include "copulaband/io.hpp"

namespace copulaband {
namespace {

constexpr double kPanel = 360.0;
constexpr double kHeatLeft = 60.0;
constexpr double kTop = 60.0;
constexpr double kSectionLeft = 520.0;
constexpr double kWidth = 940.0;
constexpr double kHeight = 480.0;

constexpr std::array<const char*, 3> kOverlayColors = {"#d62728", "#1f77b4", "#2ca02c"};

std::string f2(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string escape_xml(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Piecewise-linear approximation of the viridis map.
std::string colour(double t) {
  static constexpr std::array<std::array<double, 3>, 5> anchors = {{
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0) * 4.0;
  const int k = std::min(3, static_cast<int>(t));
  const double f = t - k;
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                static_cast<int>(std::lround(anchors[k][0] + f * (anchors[k + 1][0] - anchors[k][0]))),
                static_cast<int>(std::lround(anchors[k][1] + f * (anchors[k + 1][1] - anchors[k][1]))),
                static_cast<int>(std::lround(anchors[k][2] + f * (anchors[k + 1][2] - anchors[k][2]))));
  return buf;
}

double heat_x(double u) { return kHeatLeft + u * kPanel; }
double heat_y(double v) { return kTop + (1.0 - v) * kPanel; }

struct Pt {
  double x, y;
};

// Marching squares over the estimate for one level, as an SVG path.
std::string contour_path(const BandGrid& g, double level) {
  std::string d;
  const auto& gu = g.grid_u;
  const auto& gv = g.grid_v;
  const auto z = [&](std::size_t i, std::size_t j) { return g.estimate[g.index(i, j)]; };
  const auto lerp = [&](double x0, double y0, double z0, double x1, double y1, double z1) {
    const double t = z1 == z0 ? 0.5 : (level - z0) / (z1 - z0);
    return Pt{heat_x(x0 + t * (x1 - x0)), heat_y(y0 + t * (y1 - y0))};
  };
  const auto seg = [&](Pt a, Pt b) { d += "M" + f2(a.x) + " " + f2(a.y) + "L" + f2(b.x) + " " + f2(b.y); };
  for (std::size_t i = 0; i + 1 < gu.size(); ++i) {
    for (std::size_t j = 0; j + 1 < gv.size(); ++j) {
      const double u0 = gu[i], u1 = gu[i + 1], v0 = gv[j], v1 = gv[j + 1];
      const double a = z(i, j), b = z(i + 1, j), c = z(i + 1, j + 1), e = z(i, j + 1);
      const int mask = (a > level) | ((b > level) << 1) | ((c > level) << 2) | ((e > level) << 3);
      if (mask == 0 || mask == 15) continue;
      const Pt bottom = lerp(u0, v0, a, u1, v0, b);
      const Pt right = lerp(u1, v0, b, u1, v1, c);
      const Pt top = lerp(u0, v1, e, u1, v1, c);
      const Pt left = lerp(u0, v0, a, u0, v1, e);
      switch (mask) {
        case 1: case 14: seg(left, bottom); break;
        case 2: case 13: seg(bottom, right); break;
        case 3: case 12: seg(left, right); break;
        case 4: case 11: seg(top, right); break;
        case 6: case 9: seg(bottom, top); break;
        case 7: case 8: seg(left, top); break;
        case 5: case 10: {
          const bool centre_high = (a + b + c + e) / 4.0 > level;
          if ((mask == 5) == centre_high) {
            seg(left, top);
            seg(bottom, right);
          } else {
            seg(left, bottom);
            seg(top, right);
          }
          break;
        }
        default: break;
      }
    }
  }
  return d;
}

}  // namespace

std::string render_surface_svg(const BandGrid& g, const SurfacePlotOptions& opts) {
  require(g.grid_u.size() >= 2 && g.grid_v.size() >= 2, "plot needs at least a 2x2 grid");
  require(g.estimate.size() == g.grid_u.size() * g.grid_v.size(), "plot: grid values do not match the lattice");
  require(opts.overlays.size() <= kOverlayColors.size(), "plot supports at most 3 overlays");

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + f2(kWidth) + "\" height=\"" + f2(kHeight) +
       "\" viewBox=\"0 0 " + f2(kWidth) + " " + f2(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  if (!opts.metadata.empty()) {
    s += "<metadata>\n";
    for (const auto& [k, v] : opts.metadata) {
      s += "<entry key=\"" + escape_xml(k) + "\" value=\"" + escape_xml(v) + "\"/>\n";
    }
    s += "</metadata>\n";
  }
  s += "<rect x=\"0\" y=\"0\" width=\"" + f2(kWidth) + "\" height=\"" + f2(kHeight) + "\" fill=\"white\"/>\n";
  s += "<text x=\"" + f2(kWidth / 2) + "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">" + escape_xml(opts.title) +
       "</text>\n";

  // Heatmap.
  s += "<g id=\"heatmap\" stroke=\"none\">\n";
  for (std::size_t i = 0; i + 1 < g.grid_u.size(); ++i) {
    for (std::size_t j = 0; j + 1 < g.grid_v.size(); ++j) {
      const double mean = 0.25 * (g.estimate[g.index(i, j)] + g.estimate[g.index(i + 1, j)] +
                                  g.estimate[g.index(i, j + 1)] + g.estimate[g.index(i + 1, j + 1)]);
      const double x0 = heat_x(g.grid_u[i]), x1 = heat_x(g.grid_u[i + 1]);
      const double y0 = heat_y(g.grid_v[j]), y1 = heat_y(g.grid_v[j + 1]);
      s += "<polygon points=\"" + f2(x0) + "," + f2(y0) + " " + f2(x1) + "," + f2(y0) + " " + f2(x1) + "," + f2(y1) +
           " " + f2(x0) + "," + f2(y1) + "\" fill=\"" + colour(mean) + "\"/>\n";
    }
  }
  s += "</g>\n<g id=\"contours\" fill=\"none\" stroke=\"white\" stroke-width=\"0.8\">\n";
  for (double level : opts.contour_levels) {
    const std::string d = contour_path(g, level);
    if (!d.empty()) s += "<path data-level=\"" + f2(level) + "\" d=\"" + d + "\"/>\n";
  }
  s += "</g>\n";
  s += "<rect x=\"" + f2(kHeatLeft) + "\" y=\"" + f2(kTop) + "\" width=\"" + f2(kPanel) + "\" height=\"" + f2(kPanel) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  s += "<text x=\"" + f2(kHeatLeft + kPanel / 2) + "\" y=\"" + f2(kTop + kPanel + 30) +
       "\" text-anchor=\"middle\">u</text>\n";
  s += "<text x=\"" + f2(kHeatLeft - 30) + "\" y=\"" + f2(kTop + kPanel / 2) + "\" text-anchor=\"middle\">v</text>\n";

  // Diagonal section: nearest v node for each u node.
  std::vector<std::size_t> diag_j;
  for (double u : g.grid_u) {
    const auto it = std::min_element(g.grid_v.begin(), g.grid_v.end(),
                                     [u](double a, double b) { return std::abs(a - u) < std::abs(b - u); });
    diag_j.push_back(static_cast<std::size_t>(it - g.grid_v.begin()));
  }
  double y_lo = 0.0;
  double y_hi = 1.0;
  for (std::size_t i = 0; i < g.grid_u.size(); ++i) {
    const std::size_t k = g.index(i, diag_j[i]);
    if (std::isfinite(g.lower[k])) y_lo = std::min(y_lo, g.lower[k]);
    if (std::isfinite(g.upper[k])) y_hi = std::max(y_hi, g.upper[k]);
  }
  const auto sx = [&](double t) { return kSectionLeft + t * kPanel; };
  const auto sy = [&](double y) { return kTop + (y_hi - y) / (y_hi - y_lo) * kPanel; };

  s += "<g id=\"section\">\n";
  std::string band = "M";
  for (std::size_t i = 0; i < g.grid_u.size(); ++i) {
    band += (i ? " L" : "") + f2(sx(g.grid_u[i])) + " " + f2(sy(g.lower[g.index(i, diag_j[i])]));
  }
  for (std::size_t i = g.grid_u.size(); i-- > 0;) {
    band += " L" + f2(sx(g.grid_u[i])) + " " + f2(sy(g.upper[g.index(i, diag_j[i])]));
  }
  s += "<path id=\"band\" d=\"" + band + " Z\" fill=\"#c6dbef\" stroke=\"#6baed6\"/>\n";
  std::string est;
  for (std::size_t i = 0; i < g.grid_u.size(); ++i) {
    est += (i ? " " : "") + f2(sx(g.grid_u[i])) + "," + f2(sy(g.estimate[g.index(i, diag_j[i])]));
  }
  s += "<polyline id=\"estimate\" points=\"" + est + "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  for (std::size_t m = 0; m < opts.overlays.size(); ++m) {
    const CopulaModel& model = opts.overlays[m];
    std::string pts;
    for (int k = 0; k <= 100; ++k) {
      const double t = k / 100.0;
      pts += (k ? " " : "") + f2(sx(t)) + "," + f2(sy(cdf(model, t, t)));
    }
    s += "<polyline class=\"overlay\" data-label=\"" + escape_xml(model.label()) + "\" points=\"" + pts +
         "\" fill=\"none\" stroke=\"" + kOverlayColors[m] + "\" stroke-dasharray=\"6 3\"/>\n";
  }
  s += "</g>\n";
  s += "<rect x=\"" + f2(kSectionLeft) + "\" y=\"" + f2(kTop) + "\" width=\"" + f2(kPanel) + "\" height=\"" +
       f2(kPanel) + "\" fill=\"none\" stroke=\"black\"/>\n";
  s += "<text x=\"" + f2(kSectionLeft + kPanel / 2) + "\" y=\"" + f2(kTop + kPanel + 30) +
       "\" text-anchor=\"middle\">t (section u = v = t)</text>\n";
  s += "<text x=\"" + f2(kSectionLeft - 8) + "\" y=\"" + f2(sy(y_hi) + 4) + "\" text-anchor=\"end\">" + f2(y_hi) +
       "</text>\n";
  s += "<text x=\"" + f2(kSectionLeft - 8) + "\" y=\"" + f2(sy(y_lo) + 4) + "\" text-anchor=\"end\">" + f2(y_lo) +
       "</text>\n";

  // Legend.
  double ly = kTop + 14;
  const double lx = kSectionLeft + 10;
  s += "<g id=\"legend\">\n";
  s += "<text x=\"" + f2(lx) + "\" y=\"" + f2(ly) + "\">band half-width " + f2(g.halfwidth) + "</text>\n";
  ly += 16;
  s += "<text x=\"" + f2(lx) + "\" y=\"" + f2(ly) + "\">estimate</text>\n";
  for (std::size_t m = 0; m < opts.overlays.size(); ++m) {
    ly += 16;
    s += "<text class=\"overlay-label\" x=\"" + f2(lx) + "\" y=\"" + f2(ly) + "\" fill=\"" + kOverlayColors[m] +
         "\">" + escape_xml(opts.overlays[m].label()) + "</text>\n";
  }
  s += "</g>\n</svg>\n";
  return s;
}

void write_surface_svg(const std::filesystem::path& path, const BandGrid& grid, const SurfacePlotOptions& opts) {
  write_file_atomic(path, render_surface_svg(grid, opts));
}

}  // namespace copulaband
