#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "enmi/config.hpp"
#include "enmi/montecarlo.hpp"

using namespace enmi;

namespace {

SimConfig desk_config() {
  SimConfig cfg(CameraConfig::from_degrees(0.0367, 58.3095, 35.9020, 39.3, 70.5));
  cfg.n0_values = {0.002, 0.02, 0.2};
  cfg.trials = 200;
  cfg.seed = 415263;
  return cfg;
}

double standard_error(double rate, long trials) {
  const double p = std::max(rate, 1.0 / static_cast<double>(trials));
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

}  // namespace

TEST_CASE("run_trial separates clean observations") {
  SimConfig cfg = desk_config();
  const TileGrid grid = build_grid(cfg.camera, cfg.side, cfg.grid_options);
  long nmi_errors = 0, enmi_errors = 0;
  for (long t = 0; t < 1000; ++t) {
    GaussianStream stream(substream_key(cfg.seed, 0, static_cast<std::uint64_t>(t)));
    const TrialFlags flags = run_trial(stream, cfg, 1e-12, grid);
    nmi_errors += flags.nmi_error;
    enmi_errors += flags.enmi_error;
  }
  REQUIRE(nmi_errors == 0);
  REQUIRE(enmi_errors == 0);
}

TEST_CASE("a decoy equal to the truth ties, and ties are errors") {
  SimConfig cfg = desk_config();
  const TileGrid grid = build_grid(cfg.camera, cfg.side, cfg.grid_options);
  const std::vector<double> sigmas = tile_sigmas(grid, NoiseSpec(0.01));
  GaussianStream stream(substream_key(cfg.seed, 1, 0));
  AmplitudeVector truth(grid.count());
  for (double& x : truth) x = 128.0 + 32.0 * stream.next();
  AmplitudeVector capture(grid.count());
  for (std::size_t k = 0; k < capture.size(); ++k) capture[k] = truth[k] + sigmas[k] * stream.next();
  const TrialFlags flags = classify_trial(capture, truth, truth, sigmas, cfg.binning());
  REQUIRE(flags.nmi_error);
  REQUIRE(flags.enmi_error);
}

TEST_CASE("sweep is bit-identical across worker counts") {
  const SimConfig cfg = desk_config();
  const SweepResult serial = sweep(cfg, 1);
  const SweepResult parallel = sweep(cfg, 4);
  REQUIRE(serial == parallel);
  REQUIRE(sweep_csv(serial) == sweep_csv(parallel));

  SECTION("rows carry exact rates") {
    for (const SweepRow& r : serial.rows) {
      REQUIRE(r.trials == cfg.trials);
      REQUIRE(r.nmi_errors <= r.trials);
      REQUIRE(r.enmi_errors <= r.trials);
      REQUIRE(r.nmi_error_rate == static_cast<double>(r.nmi_errors) / static_cast<double>(r.trials));
      REQUIRE(r.enmi_error_rate == static_cast<double>(r.enmi_errors) / static_cast<double>(r.trials));
    }
  }
  SECTION("a different seed gives a different sweep") {
    SimConfig other = desk_config();
    other.seed = 999;
    REQUIRE_FALSE(sweep(other, 1) == serial);
  }
}

TEST_CASE("csv round trip is exact") {
  const SweepResult result = sweep(desk_config(), 2);
  const std::string csv = sweep_csv(result);
  REQUIRE(parse_sweep_csv(csv) == result);
}

TEST_CASE("emit_curves") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "enmi_mc_test";
  fs::create_directories(dir);

  SECTION("single-row result writes header plus one row") {
    SweepResult r;
    r.rows.push_back(SweepRow{0.01, 10, 2, 1, 0.2, 0.1});
    emit_curves(r, dir / "one.csv", dir / "one.svg");
    std::ifstream in(dir / "one.csv");
    std::string line;
    REQUIRE(std::getline(in, line));
    REQUIRE(line == "n0,trials,nmi_errors,enmi_errors,nmi_error_rate,enmi_error_rate");
    REQUIRE(std::getline(in, line));
    REQUIRE(line == "0.01,10,2,1,0.2,0.1");
    REQUIRE_FALSE(std::getline(in, line));

    std::ifstream svg_in(dir / "one.svg");
    std::string svg((std::istreambuf_iterator<char>(svg_in)), std::istreambuf_iterator<char>());
    REQUIRE(svg.find("<svg") != std::string::npos);
    REQUIRE(svg.find("polyline") != std::string::npos);
  }
  SECTION("empty result is an error") {
    REQUIRE_THROWS_AS(emit_curves(SweepResult{}, dir / "none.csv"), std::invalid_argument);
    REQUIRE_FALSE(fs::exists(dir / "none.csv"));
  }
  fs::remove_all(dir);
}

TEST_CASE("error rates grow with noise and saturate at guessing", "[slow]") {
  SimConfig cfg = desk_config();
  cfg.trials = 10000;
  cfg.n0_values = {0.002, 0.02, 0.2};
  const SweepResult r = sweep(cfg, 4);
  REQUIRE(r.rows[0].nmi_error_rate <= r.rows[1].nmi_error_rate);
  REQUIRE(r.rows[1].nmi_error_rate <= r.rows[2].nmi_error_rate);
  REQUIRE(r.rows[0].enmi_error_rate <= r.rows[1].enmi_error_rate);
  REQUIRE(r.rows[1].enmi_error_rate <= r.rows[2].enmi_error_rate);

  SimConfig tail = desk_config();
  tail.trials = 10000;
  tail.n0_values = {0.5, 2.0};
  const SweepResult t = sweep(tail, 4);
  for (const SweepRow& row : t.rows) {
    REQUIRE(row.nmi_error_rate >= 0.45);
    REQUIRE(row.nmi_error_rate <= 0.55);
    REQUIRE(row.enmi_error_rate >= 0.45);
    REQUIRE(row.enmi_error_rate <= 0.55);
  }
}

TEST_CASE("likelihood weighting dominates plain binning at moderate noise", "[slow]") {
  SimConfig cfg = desk_config();
  cfg.trials = 4000;
  cfg.n0_values = {0.01, 0.05, 0.1};
  const SweepResult r = sweep(cfg, 4);
  for (const SweepRow& row : r.rows) {
    const double guard = 2.0 * std::sqrt(standard_error(row.nmi_error_rate, row.trials) *
                                             standard_error(row.nmi_error_rate, row.trials) +
                                         standard_error(row.enmi_error_rate, row.trials) *
                                             standard_error(row.enmi_error_rate, row.trials));
    REQUIRE(row.enmi_error_rate <= row.nmi_error_rate + guard);
  }
}
