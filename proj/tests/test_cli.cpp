#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "enmi/cli.hpp"

using namespace enmi;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("enmi_cli_" + std::to_string(::getpid()) + "_" +
                                        std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

fs::path write_camera_json(const fs::path& dir) {
  const fs::path p = dir / "camera.json";
  std::ofstream out(p);
  out << R"({"focal_length_cm":0.0367,"height_cm":58.3095,"pitch_deg":35.9020,)"
      << R"("vfov_deg":39.3,"hfov_deg":70.5})";
  return p;
}

fs::path write_sim_json(const fs::path& dir, long trials, std::uint64_t seed) {
  const fs::path p = dir / "sim.json";
  nlohmann::json j = sim_config_to_json([&] {
    SimConfig cfg(CameraConfig::from_degrees(0.0367, 58.3095, 35.9020, 39.3, 70.5));
    cfg.n0_values = {0.001, 0.01};
    cfg.trials = trials;
    cfg.seed = seed;
    return cfg;
  }());
  std::ofstream out(p);
  out << j.dump(2);
  return p;
}

int run_cli(const std::vector<std::string>& argv, std::string* out_text = nullptr,
            std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = cli::main_entry(argv, out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("argument parsing") {
  SECTION("missing required flag is a usage error") {
    std::string err;
    REQUIRE(run_cli({"simulate"}, nullptr, &err) == 2);
    REQUIRE(err.find("--config") != std::string::npos);
  }
  SECTION("unknown subcommand is a usage error") {
    REQUIRE(run_cli({"frobnicate"}) == 2);
  }
  SECTION("bad enum value lists the choices") {
    TempDir tmp;
    const fs::path cam = write_camera_json(tmp.path);
    const fs::path cap = tmp.path / "cap.txt";
    std::ofstream(cap) << "1 2 3\n";
    std::string err;
    REQUIRE(run_cli({"match", "--capture", cap.string(), "--candidates", tmp.path.string(),
                     "--camera", cam.string(), "--mode", "bogus"},
                    nullptr, &err) == 2);
    REQUIRE(err.find("nmi") != std::string::npos);
    REQUIRE(err.find("enmi") != std::string::npos);
  }
  SECTION("help exits 0 and names the subcommands") {
    std::string out;
    REQUIRE(run_cli({"--help"}, &out) == 0);
    for (const char* cmd : {"project", "match", "simulate", "mask"})
      REQUIRE(out.find(cmd) != std::string::npos);
  }
  SECTION("missing input file is a usage error") {
    REQUIRE(run_cli({"project", "--camera", "/nonexistent/camera.json"}) == 2);
  }
}

TEST_CASE("project subcommand") {
  TempDir tmp;
  const fs::path cam = write_camera_json(tmp.path);

  std::string out;
  REQUIRE(run_cli({"project", "--camera", cam.string(), "--n0", "0.01"}, &out) == 0);
  REQUIRE(count_lines(out) == 67);  // header + 66 tiles
  REQUIRE(out.rfind("row,col,x_l,x_u,z_l,z_u,area_cm2,sigma\n", 0) == 0);

  SECTION("--out writes the same CSV to a file") {
    const fs::path csv = tmp.path / "grid.csv";
    REQUIRE(run_cli({"project", "--camera", cam.string(), "--n0", "0.01", "--out", csv.string()}) == 0);
    REQUIRE(slurp(csv) == out);
  }
}

TEST_CASE("match subcommand") {
  TempDir tmp;
  const fs::path cam = write_camera_json(tmp.path);
  const TileGrid grid = build_grid(CameraConfig::from_degrees(0.0367, 58.3095, 35.9020, 39.3, 70.5), 20.0);

  SplitMix64 rng(55);
  const auto write_section = [&](const fs::path& p, const AmplitudeVector& v) {
    std::ofstream out(p);
    out << "# section amplitudes\n";
    for (double x : v) out << x << "\n";
  };
  AmplitudeVector capture(grid.count());
  for (double& x : capture) x = 256.0 * rng.next_double();
  AmplitudeVector decoy(grid.count());
  for (double& x : decoy) x = 256.0 * rng.next_double();

  const fs::path cands = tmp.path / "cands";
  fs::create_directories(cands);
  write_section(cands / "alpha.txt", decoy);
  write_section(cands / "beta.txt", capture);
  write_section(tmp.path / "capture.txt", capture);

  SECTION("directory candidates") {
    std::string out;
    REQUIRE(run_cli({"match", "--capture", (tmp.path / "capture.txt").string(), "--candidates",
                     cands.string(), "--camera", cam.string(), "--mode", "nmi"},
                    &out) == 0);
    REQUIRE(out.rfind("winner beta", 0) == 0);
    REQUIRE(out.find("id,score") != std::string::npos);
    REQUIRE(out.find("alpha,") != std::string::npos);
  }
  SECTION("manifest candidates, enmi mode, csv to file") {
    const fs::path manifest = tmp.path / "cands.csv";
    std::ofstream(manifest) << "id,path\nsection-a," << (cands / "alpha.txt").string()
                            << "\nsection-b," << (cands / "beta.txt").string() << "\n";
    const fs::path score_csv = tmp.path / "scores.csv";
    std::string out;
    REQUIRE(run_cli({"match", "--capture", (tmp.path / "capture.txt").string(), "--candidates",
                     manifest.string(), "--camera", cam.string(), "--mode", "enmi", "--n0", "0.001",
                     "--out", score_csv.string()},
                    &out) == 0);
    REQUIRE(out.rfind("winner section-b", 0) == 0);
    const std::string csv = slurp(score_csv);
    REQUIRE(csv.rfind("id,score\n", 0) == 0);
    REQUIRE(csv.find("section-a,") != std::string::npos);
  }
  SECTION("capture shorter than the grid is a runtime error") {
    std::ofstream(tmp.path / "short.txt") << "1 2 3\n";
    std::string err;
    REQUIRE(run_cli({"match", "--capture", (tmp.path / "short.txt").string(), "--candidates",
                     cands.string(), "--camera", cam.string()},
                    nullptr, &err) == 1);
    REQUIRE(err.find("error:") != std::string::npos);
  }
}

TEST_CASE("simulate subcommand") {
  TempDir tmp;
  const fs::path sim = write_sim_json(tmp.path, 10, 404);
  const fs::path csv = tmp.path / "results.csv";
  const fs::path svg = tmp.path / "curves.svg";

  REQUIRE(run_cli({"simulate", "--config", sim.string(), "--out", csv.string(), "--svg",
                   svg.string()}) == 0);
  const std::string first = slurp(csv);
  REQUIRE(first.rfind("n0,trials,nmi_errors,enmi_errors,nmi_error_rate,enmi_error_rate\n", 0) == 0);
  REQUIRE(count_lines(first) == 3);  // header + 2 n0 rows
  REQUIRE(slurp(svg).find("<svg") == 0);

  SECTION("identical inputs give byte-identical outputs") {
    const fs::path csv2 = tmp.path / "results2.csv";
    REQUIRE(run_cli({"simulate", "--config", sim.string(), "--out", csv2.string()}) == 0);
    REQUIRE(slurp(csv2) == first);
  }
  SECTION("worker override preserves bytes") {
    const fs::path csv4 = tmp.path / "results4.csv";
    REQUIRE(run_cli({"simulate", "--config", sim.string(), "--out", csv4.string(), "--workers",
                     "4"}) == 0);
    REQUIRE(slurp(csv4) == first);
  }
  SECTION("trial override changes the row counts") {
    const fs::path csv3 = tmp.path / "results3.csv";
    REQUIRE(run_cli({"simulate", "--config", sim.string(), "--out", csv3.string(), "--trials",
                     "7"}) == 0);
    REQUIRE(slurp(csv3).find(",7,") != std::string::npos);
  }
  SECTION("unwritable output directory fails without partial files") {
    const fs::path bad = tmp.path / "no_such_dir" / "results.csv";
    std::string err;
    REQUIRE(run_cli({"simulate", "--config", sim.string(), "--out", bad.string()}, nullptr, &err) == 1);
    REQUIRE_FALSE(fs::exists(bad));
    REQUIRE(err.find("error:") != std::string::npos);
  }
}

TEST_CASE("mask subcommand") {
  TempDir tmp;
  GrayImage prior(6, 4, 100);
  GrayImage a(6, 4, 110), b(6, 4, 95);
  write_pgm(prior, tmp.path / "prior.pgm");
  write_pgm(a, tmp.path / "a.pgm", false);
  write_pgm(b, tmp.path / "b.pgm");

  SECTION("two pairs produce mask csv and preview") {
    std::ofstream(tmp.path / "pairs.csv") << "local_path,prior_path\na.pgm,prior.pgm\nb.pgm,prior.pgm\n";
    const fs::path out_csv = tmp.path / "mask.csv";
    const fs::path preview = tmp.path / "mask.pgm";
    REQUIRE(run_cli({"mask", "--pairs", (tmp.path / "pairs.csv").string(), "--out", out_csv.string(),
                     "--preview", preview.string()}) == 0);
    const std::string csv = slurp(out_csv);
    REQUIRE(csv.rfind("i,j,variance\n", 0) == 0);
    REQUIRE(count_lines(csv) == 25);  // header + 24 pixels
    REQUIRE(csv.find("0,0,125") != std::string::npos);  // (10^2 + 5^2) / 1
    REQUIRE(slurp(preview).rfind("P5", 0) == 0);
  }
  SECTION("single pair exits 1 and explains the n >= 2 requirement") {
    std::ofstream(tmp.path / "one.csv") << "local_path,prior_path\na.pgm,prior.pgm\n";
    std::string err;
    REQUIRE(run_cli({"mask", "--pairs", (tmp.path / "one.csv").string(), "--out",
                     (tmp.path / "m.csv").string()},
                    nullptr, &err) == 1);
    REQUIRE(err.find("n >= 2") != std::string::npos);
    REQUIRE_FALSE(fs::exists(tmp.path / "m.csv"));
  }
  SECTION("validity mask drops excluded pixels from the csv") {
    GrayImage valid(6, 4, 255);
    valid.pixels[0] = 0;
    write_pgm(valid, tmp.path / "valid.pgm");
    std::ofstream(tmp.path / "pairs.csv") << "local_path,prior_path\na.pgm,prior.pgm\nb.pgm,prior.pgm\n";
    const fs::path out_csv = tmp.path / "mask.csv";
    std::string out;
    REQUIRE(run_cli({"mask", "--pairs", (tmp.path / "pairs.csv").string(), "--out", out_csv.string(),
                     "--valid", (tmp.path / "valid.pgm").string()},
                    &out) == 0);
    REQUIRE(count_lines(slurp(out_csv)) == 24);  // header + 23 valid pixels
    REQUIRE(out.find("excluded 1") != std::string::npos);
  }
}
