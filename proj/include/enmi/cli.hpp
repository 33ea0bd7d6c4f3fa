// Command-line front end: `project`, `match`, `simulate`, `mask`.
// Exit codes: 0 success, 1 runtime failure, 2 usage error. All file
// outputs are written atomically (temp + rename).

#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "enmi/config.hpp"
#include "enmi/matcher.hpp"
#include "enmi/montecarlo.hpp"
#include "enmi/variance_mask.hpp"

namespace enmi::cli {

struct ProjectArgs {
  std::string camera_path;
  double side = 20.0;
  double lateral_slack = GridOptions{}.lateral_slack;
  double n0 = 0.01;
  std::string out_path;  // empty = stdout
};

struct MatchArgs {
  std::string capture_path;
  std::string candidates_path;  // directory or id,path manifest
  std::string camera_path;
  std::string mode = "nmi";
  double n0 = 0.01;
  int bins = 32;
  double side = 20.0;
  double lateral_slack = GridOptions{}.lateral_slack;
  std::string out_path;  // empty = stdout only
};

struct SimulateArgs {
  std::string config_path;
  std::string out_path;
  std::string svg_path;
  std::optional<long> trials;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
};

struct MaskArgs {
  std::string pairs_path;
  std::string out_path;
  std::string preview_path;
  std::string valid_path;
};

struct RunConfig {
  std::variant<ProjectArgs, MatchArgs, SimulateArgs, MaskArgs> args;
};

/// Thrown for malformed command lines; carries the exit status (2, or 0
/// for --help).
struct UsageExit {
  int code = 2;
  std::string message;
};

inline RunConfig parse_args(const std::vector<std::string>& argv) {
  CLI::App app{"ENMI road-image localization toolkit"};
  app.require_subcommand(1);

  ProjectArgs project;
  auto* p = app.add_subcommand("project", "Tessellate the visible road and print per-tile areas and sigmas");
  p->add_option("--camera", project.camera_path, "camera JSON")->required()->check(CLI::ExistingFile);
  p->add_option("--side", project.side, "tile side (cm)");
  p->add_option("--slack", project.lateral_slack, "lateral slack for tile visibility (cm)");
  p->add_option("--n0", project.n0, "noise power spectral density");
  p->add_option("--out", project.out_path, "output CSV (default: stdout)");

  MatchArgs match;
  auto* m = app.add_subcommand("match", "Score a capture against candidate map sections");
  m->add_option("--capture", match.capture_path, "capture amplitude file")->required()->check(CLI::ExistingFile);
  m->add_option("--candidates", match.candidates_path, "candidate directory or id,path manifest")
      ->required()
      ->check(CLI::ExistingPath);
  m->add_option("--mode", match.mode, "scoring mode")->check(CLI::IsMember({"nmi", "enmi"}));
  m->add_option("--camera", match.camera_path, "camera JSON")->required()->check(CLI::ExistingFile);
  m->add_option("--n0", match.n0, "noise power spectral density");
  m->add_option("--bins", match.bins, "amplitude bins");
  m->add_option("--side", match.side, "tile side (cm)");
  m->add_option("--slack", match.lateral_slack, "lateral slack for tile visibility (cm)");
  m->add_option("--out", match.out_path, "also write the score CSV here");

  SimulateArgs simulate;
  auto* s = app.add_subcommand("simulate", "Run the NMI/ENMI error-probability sweep");
  s->add_option("--config", simulate.config_path, "simulation config JSON")->required()->check(CLI::ExistingFile);
  s->add_option("--out", simulate.out_path, "results CSV")->required();
  s->add_option("--svg", simulate.svg_path, "also write an SVG plot");
  long trials_override = 0;
  auto* trials_opt = s->add_option("--trials", trials_override, "override trial count");
  std::uint64_t seed_override = 0;
  auto* seed_opt = s->add_option("--seed", seed_override, "override RNG seed");
  unsigned workers_override = 0;
  auto* workers_opt = s->add_option("--workers", workers_override, "worker thread cap");

  MaskArgs mask;
  auto* k = app.add_subcommand("mask", "Estimate a per-pixel variance mask from aligned image pairs");
  k->add_option("--pairs", mask.pairs_path, "manifest CSV (local_path,prior_path)")
      ->required()
      ->check(CLI::ExistingFile);
  k->add_option("--out", mask.out_path, "mask CSV (i,j,variance)")->required();
  k->add_option("--preview", mask.preview_path, "min-max normalized PGM preview");
  k->add_option("--valid", mask.valid_path, "validity PGM (zero pixels excluded)")->check(CLI::ExistingFile);

  std::vector<std::string> args(argv.rbegin(), argv.rend());  // CLI11 wants reversed
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    std::ostringstream help;
    help << app.help();
    throw UsageExit{0, help.str()};
  } catch (const CLI::ParseError& e) {
    throw UsageExit{2, std::string(e.what())};
  }

  RunConfig cfg{ProjectArgs{}};
  if (p->parsed()) {
    cfg.args = project;
  } else if (m->parsed()) {
    cfg.args = match;
  } else if (s->parsed()) {
    if (trials_opt->count() > 0) simulate.trials = trials_override;
    if (seed_opt->count() > 0) simulate.seed = seed_override;
    if (workers_opt->count() > 0) simulate.workers = workers_override;
    cfg.args = simulate;
  } else {
    cfg.args = mask;
  }
  return cfg;
}

namespace detail {

/// Amplitude vector file: one value per line, '#' comments and blank
/// lines ignored.
inline AmplitudeVector load_amplitudes(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  AmplitudeVector values;
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double v = 0.0;
    while (ls >> v) values.push_back(v);
  }
  if (values.empty()) throw std::runtime_error("no amplitude values in " + path.string());
  return values;
}

inline std::vector<std::pair<std::string, std::string>> read_two_column_csv(
    const std::filesystem::path& path, const std::string& header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::pair<std::string, std::string>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first && line == header) {
      first = false;
      continue;
    }
    first = false;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("bad manifest row: " + line);
    rows.emplace_back(line.substr(0, comma), line.substr(comma + 1));
  }
  return rows;
}

/// Candidates from a directory (every regular file, id = stem, sorted by
/// id) or from an id,path manifest (listed order).
inline std::vector<CandidateSection> load_candidates(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  std::vector<CandidateSection> candidates;
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path))
      if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files)
      candidates.push_back(CandidateSection{f.stem().string(), f.string(), load_amplitudes(f)});
  } else {
    for (const auto& [id, file] : read_two_column_csv(path, "id,path")) {
      fs::path resolved(file);
      if (resolved.is_relative()) resolved = path.parent_path() / resolved;
      candidates.push_back(CandidateSection{id, resolved.string(), load_amplitudes(resolved)});
    }
  }
  if (candidates.empty()) throw std::runtime_error("no candidates under " + path.string());
  return candidates;
}

inline void write_or_print(const std::string& content, const std::string& out_path, std::ostream& out) {
  if (out_path.empty())
    out << content;
  else
    atomic_write_file(out_path, content);
}

inline int run_project(const ProjectArgs& a, std::ostream& out) {
  const CameraConfig camera = camera_from_json(load_json(a.camera_path));
  const TileGrid grid = build_grid(camera, a.side, GridOptions{a.lateral_slack});
  const std::vector<double> sigmas = tile_sigmas(grid, NoiseSpec(a.n0));
  std::string csv = "row,col,x_l,x_u,z_l,z_u,area_cm2,sigma\n";
  for (std::size_t i = 0; i < grid.tiles.size(); ++i) {
    const Tile& t = grid.tiles[i];
    csv += std::to_string(t.row) + ',' + std::to_string(t.col) + ',' +
           format_double(t.region.x_lower) + ',' + format_double(t.region.x_upper) + ',' +
           format_double(t.region.z_lower) + ',' + format_double(t.region.z_upper) + ',' +
           format_double(t.area) + ',' + format_double(sigmas[i]) + '\n';
  }
  write_or_print(csv, a.out_path, out);
  return 0;
}

inline int run_match(const MatchArgs& a, std::ostream& out) {
  const CameraConfig camera = camera_from_json(load_json(a.camera_path));
  const TileGrid grid = build_grid(camera, a.side, GridOptions{a.lateral_slack});
  const AmplitudeVector capture = load_amplitudes(a.capture_path);
  const std::vector<CandidateSection> candidates = load_candidates(a.candidates_path);
  const ScoreMode mode = a.mode == "enmi" ? ScoreMode::enmi : ScoreMode::nmi;
  const MatchResult result = best_match(capture, candidates, mode, grid, NoiseSpec(a.n0),
                                        BinningScheme::uniform(a.bins, 0.0, 256.0));
  out << "winner " << result.best_id << "\n";
  std::string csv = "id,score\n";
  for (const CandidateScore& s : result.scores) csv += s.id + ',' + format_double(s.score) + '\n';
  if (!a.out_path.empty())
    atomic_write_file(a.out_path, csv);
  else
    out << csv;
  return 0;
}

inline int run_simulate(const SimulateArgs& a, std::ostream& out) {
  SimConfig cfg = sim_config_from_json(load_json(a.config_path));
  if (a.trials) cfg.trials = *a.trials;
  if (a.seed) cfg.seed = *a.seed;
  unsigned workers = 1;
  if (a.workers) {
    workers = *a.workers;
  } else if (const char* env = std::getenv("ENMI_LOC_WORKERS")) {
    const long parsed = std::strtol(env, nullptr, 10);
    if (parsed > 0) workers = static_cast<unsigned>(parsed);
  }
  const SweepResult result = sweep(cfg, workers);
  emit_curves(result, std::filesystem::path(a.out_path), std::filesystem::path(a.svg_path));
  out << "wrote " << a.out_path;
  if (!a.svg_path.empty()) out << " and " << a.svg_path;
  out << " (" << result.rows.size() << " n0 points, " << cfg.trials << " trials each)\n";
  return 0;
}

inline int run_mask(const MaskArgs& a, std::ostream& out) {
  const auto rows = read_two_column_csv(a.pairs_path, "local_path,prior_path");
  const std::filesystem::path base = std::filesystem::path(a.pairs_path).parent_path();
  const auto resolve = [&](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_relative() ? base / fp : fp;
  };
  MaskAccumulator acc;
  for (const auto& [local, prior] : rows) acc.add_pair(read_pgm(resolve(local)), read_pgm(resolve(prior)));
  VarianceMask mask = acc.finalize();

  long excluded = 0;
  if (!a.valid_path.empty()) {
    const GrayImage validity = read_pgm(a.valid_path);
    if (validity.width != mask.width || validity.height != mask.height)
      throw std::runtime_error("validity image dimensions differ from pairs");
    mask.valid.resize(mask.variance.size());
    for (std::size_t i = 0; i < mask.variance.size(); ++i) {
      mask.valid[i] = validity.pixels[i] != 0 ? 1 : 0;
      if (!mask.valid[i]) {
        mask.variance[i] = 0.0;
        ++excluded;
      }
    }
  }

  std::string csv = "i,j,variance\n";
  for (int r = 0; r < mask.height; ++r)
    for (int c = 0; c < mask.width; ++c) {
      if (!mask.is_valid(r, c)) continue;
      csv += std::to_string(r) + ',' + std::to_string(c) + ',' +
             format_double(mask.variance[static_cast<std::size_t>(r) * mask.width + c]) + '\n';
    }
  atomic_write_file(a.out_path, csv);
  if (!a.preview_path.empty()) write_pgm(mask_preview(mask), a.preview_path);
  out << "accumulated " << mask.sample_count << " pairs at " << mask.width << "x" << mask.height;
  if (excluded > 0) out << ", excluded " << excluded << " invalid pixels";
  out << "\n";
  return 0;
}

}  // namespace detail

inline int run(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    return std::visit(
        [&](const auto& args) {
          using T = std::decay_t<decltype(args)>;
          if constexpr (std::is_same_v<T, ProjectArgs>) return detail::run_project(args, out);
          else if constexpr (std::is_same_v<T, MatchArgs>) return detail::run_match(args, out);
          else if constexpr (std::is_same_v<T, SimulateArgs>) return detail::run_simulate(args, out);
          else return detail::run_mask(args, out);
        },
        cfg.args);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

inline int main_entry(const std::vector<std::string>& argv, std::ostream& out = std::cout,
                      std::ostream& err = std::cerr) {
  try {
    return run(parse_args(argv), out, err);
  } catch (const UsageExit& e) {
    (e.code == 0 ? out : err) << e.message << (e.message.ends_with('\n') ? "" : "\n");
    return e.code;
  }
}

}  // namespace enmi::cli
