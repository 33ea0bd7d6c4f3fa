// Tessellation of the camera-visible road into equal physical squares.
//
// Tiles are squares of the given side on the road plane, laid out on a
// lattice: rows advance away from the camera in steps of one side of
// ground distance, columns are centered on the vehicle axis (one column
// centered on x = 0, so row widths are odd). In optical-axis depth the
// row extent is side*cos(pitch). A tile belongs to the grid iff all four
// road-plane corners project inside the focal-plane field-of-view
// rectangle, laterally widened by `lateral_slack` (road cm); the slack is
// a calibration constant of the default configuration, not a hidden
// fudge, and slack 0 recovers the strict frustum.

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "enmi/camera.hpp"
#include "enmi/noise.hpp"

namespace enmi {

struct GridOptions {
  double lateral_slack = 4.0;  // road cm added to the lateral half-width test
};

/// One square of the tessellation. `row` counts from the nearest row,
/// `col` left-to-right within the row; `region` carries optical-axis depth
/// bounds and `area` its focal-plane footprint.
struct Tile {
  int row = 0;
  int col = 0;
  RoadRegion region;
  double area = 0.0;
};

/// Immutable tessellation; tiles are flattened row-major, nearest row
/// first, left-to-right.
struct TileGrid {
  CameraConfig cfg;
  double side = 0.0;
  GridOptions options;
  std::vector<Tile> tiles;
  std::vector<int> row_widths;

  std::size_t count() const { return tiles.size(); }
};

namespace detail {

// Ground-distance window [d_near, d_far] whose rays fall inside the
// vertical field of view. y~ = +-f*tan(vfov/2) inverted through
// depth_from_ytilde, then converted from optical depth to ground distance
// via z = d*cos(theta) + h*sin(theta).
inline std::pair<double, double> visible_ground_window(const CameraConfig& cfg) {
  const double half = std::tan(cfg.vertical_fov / 2.0);
  const double z_near = cfg.height / (cfg.sin_pitch() + half * cfg.cos_pitch());
  const double z_far = cfg.height / (cfg.sin_pitch() - half * cfg.cos_pitch());
  const double offset = cfg.height * cfg.sin_pitch();
  return {(z_near - offset) / cfg.cos_pitch(), (z_far - offset) / cfg.cos_pitch()};
}

inline double ground_to_optical(const CameraConfig& cfg, double d) {
  return d * cfg.cos_pitch() + cfg.height * cfg.sin_pitch();
}

}  // namespace detail

/// Builds the tessellation of every fully visible square of the given
/// side. Throws if the field of view admits no tile.
inline TileGrid build_grid(const CameraConfig& cfg, double side, const GridOptions& options = {}) {
  if (!(side > 0.0)) throw std::invalid_argument("build_grid: side must be > 0");

  const auto [d_near, d_far] = detail::visible_ground_window(cfg);
  const int rows = static_cast<int>(std::floor((d_far - d_near) / side + 1e-12));
  const double half_tan = std::tan(cfg.horizontal_fov / 2.0);

  TileGrid grid{cfg, side, options, {}, {}};
  for (int i = 0; i < rows; ++i) {
    const double z_l = detail::ground_to_optical(cfg, d_near + i * side);
    const double z_u = detail::ground_to_optical(cfg, d_near + (i + 1) * side);
    // lateral bound is tightest at the near corners (x~ = f*x/z shrinks
    // with z); n tiles centered on x=0 span [-n*side/2, n*side/2]
    const double half_width = z_l * half_tan + options.lateral_slack;
    int n = static_cast<int>(std::floor(half_width / (side / 2.0)));
    if (n % 2 == 0) --n;
    if (n <= 0) continue;
    const int row = static_cast<int>(grid.row_widths.size());
    for (int j = 0; j < n; ++j) {
      const double center = (j - (n - 1) / 2) * side;
      RoadRegion region(center - side / 2.0, center + side / 2.0, z_l, z_u);
      grid.tiles.push_back(Tile{row, j, region, projected_area(cfg, region)});
    }
    grid.row_widths.push_back(n);
  }
  if (grid.tiles.empty()) throw std::domain_error("build_grid: field of view admits no tile");
  return grid;
}

/// Focal-plane footprint of each tile, in flattening order.
inline std::vector<double> tile_areas(const TileGrid& grid) {
  std::vector<double> areas;
  areas.reserve(grid.tiles.size());
  for (const Tile& t : grid.tiles) areas.push_back(t.area);
  return areas;
}

/// Per-tile noise levels sigma_k = sqrt(N0 / A~_k), in flattening order.
inline std::vector<double> tile_sigmas(const TileGrid& grid, const NoiseSpec& spec) {
  std::vector<double> sigmas;
  sigmas.reserve(grid.tiles.size());
  for (const Tile& t : grid.tiles) sigmas.push_back(tile_variance(t.area, spec).std);
  return sigmas;
}

}  // namespace enmi
