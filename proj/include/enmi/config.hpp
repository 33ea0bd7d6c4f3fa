// JSON bindings for configs, grids and regression fixtures.
//
// Angles cross this boundary in degrees and are stored in radians
// internally; all lengths are centimeters.

#pragma once

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "enmi/camera.hpp"
#include "enmi/grid.hpp"
#include "enmi/io.hpp"
#include "enmi/montecarlo.hpp"

namespace enmi {

using nlohmann::json;

inline json camera_to_json(const CameraConfig& cfg) {
  return json{{"focal_length_cm", cfg.focal_length},
              {"height_cm", cfg.height},
              {"pitch_deg", rad_to_deg(cfg.pitch)},
              {"vfov_deg", rad_to_deg(cfg.vertical_fov)},
              {"hfov_deg", rad_to_deg(cfg.horizontal_fov)}};
}

inline CameraConfig camera_from_json(const json& j) {
  return CameraConfig::from_degrees(j.at("focal_length_cm").get<double>(),
                                    j.at("height_cm").get<double>(),
                                    j.at("pitch_deg").get<double>(),
                                    j.at("vfov_deg").get<double>(),
                                    j.at("hfov_deg").get<double>());
}

inline json sim_config_to_json(const SimConfig& cfg) {
  return json{{"camera", camera_to_json(cfg.camera)},
              {"side_cm", cfg.side},
              {"lateral_slack_cm", cfg.grid_options.lateral_slack},
              {"amplitude_mean", cfg.amplitude_mean},
              {"amplitude_std", cfg.amplitude_std},
              {"amplitude_min", cfg.amplitude_min},
              {"amplitude_max", cfg.amplitude_max},
              {"n0_values", cfg.n0_values},
              {"trials", cfg.trials},
              {"seed", cfg.seed},
              {"bins", cfg.bins}};
}

inline SimConfig sim_config_from_json(const json& j) {
  SimConfig cfg(camera_from_json(j.at("camera")));
  cfg.side = j.at("side_cm").get<double>();
  cfg.grid_options.lateral_slack = j.value("lateral_slack_cm", cfg.grid_options.lateral_slack);
  cfg.amplitude_mean = j.value("amplitude_mean", cfg.amplitude_mean);
  cfg.amplitude_std = j.value("amplitude_std", cfg.amplitude_std);
  cfg.amplitude_min = j.value("amplitude_min", cfg.amplitude_min);
  cfg.amplitude_max = j.value("amplitude_max", cfg.amplitude_max);
  cfg.n0_values = j.at("n0_values").get<std::vector<double>>();
  cfg.trials = j.value("trials", cfg.trials);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.bins = j.value("bins", cfg.bins);
  cfg.validate();
  return cfg;
}

inline json grid_to_json(const TileGrid& grid) {
  json tiles = json::array();
  for (const Tile& t : grid.tiles)
    tiles.push_back(json{{"row", t.row},
                         {"col", t.col},
                         {"x_l", t.region.x_lower},
                         {"x_u", t.region.x_upper},
                         {"z_l", t.region.z_lower},
                         {"z_u", t.region.z_upper},
                         {"area_cm2", t.area}});
  return json{{"camera", camera_to_json(grid.cfg)},
              {"side_cm", grid.side},
              {"lateral_slack_cm", grid.options.lateral_slack},
              {"row_widths", grid.row_widths},
              {"tiles", tiles}};
}

/// Rebuilds a grid from its serialized form without re-running the
/// construction; tile order is whatever the file stores.
inline TileGrid grid_from_json(const json& j) {
  TileGrid grid{camera_from_json(j.at("camera")),
                j.at("side_cm").get<double>(),
                GridOptions{j.value("lateral_slack_cm", GridOptions{}.lateral_slack)},
                {},
                j.at("row_widths").get<std::vector<int>>()};
  for (const json& t : j.at("tiles")) {
    RoadRegion region(t.at("x_l").get<double>(), t.at("x_u").get<double>(),
                      t.at("z_l").get<double>(), t.at("z_u").get<double>());
    grid.tiles.push_back(Tile{t.at("row").get<int>(), t.at("col").get<int>(), region,
                              t.at("area_cm2").get<double>()});
  }
  return grid;
}

inline json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  json j;
  in >> j;
  return j;
}

inline void save_json(const json& j, const std::filesystem::path& path) {
  atomic_write_file(path, j.dump(2) + "\n");
}

}  // namespace enmi
