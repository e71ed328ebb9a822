#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "copulaband/bands.hpp"
#include "copulaband/families.hpp"

namespace copulaband {

struct SurfacePlotOptions {
  std::string title = "Local-linear copula estimate";
  /// Parametric copulas drawn against the band on the diagonal section (at most 3).
  std::vector<CopulaModel> overlays;
  std::vector<double> contour_levels = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  /// Written as <entry key=".." value=".."/> inside <metadata>.
  std::map<std::string, std::string> metadata;
};

/// Two-panel SVG: a heatmap of the estimate (one <polygon> per grid cell)
/// with contour lines, and the diagonal section u = v showing the band,
/// the estimate and the overlay curves. Output depends only on the inputs.
std::string render_surface_svg(const BandGrid& grid, const SurfacePlotOptions& opts = {});
void write_surface_svg(const std::filesystem::path& path, const BandGrid& grid, const SurfacePlotOptions& opts = {});

}  // namespace copulaband
