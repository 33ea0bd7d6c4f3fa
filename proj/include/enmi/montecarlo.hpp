// Error-probability experiment: for each noise level N0, draw a true
// section a and an unrelated candidate u_hat, corrupt a into the capture
// V = a + N with per-tile variance N0/A~_k, and record whether the wrong
// candidate scores at least as high as the right one (ties count as
// errors) under NMI and under ENMI.
//
// Every trial consumes its own RNG substream keyed by (seed, n0-index,
// trial-index) and error counts are integers, so the sweep is bit-identical
// for a fixed seed no matter how many workers run it.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "enmi/grid.hpp"
#include "enmi/io.hpp"
#include "enmi/mi.hpp"
#include "enmi/rng.hpp"

namespace enmi {

struct SimConfig {
  explicit SimConfig(CameraConfig cam) : camera(std::move(cam)) {}

  CameraConfig camera;
  double side = 20.0;
  GridOptions grid_options;
  double amplitude_mean = 128.0;
  double amplitude_std = 32.0;
  double amplitude_min = 0.0;
  double amplitude_max = 256.0;  // draws clamp into [min, max)
  std::vector<double> n0_values;
  long trials = 10000;
  std::uint64_t seed = 0;
  int bins = 32;

  void validate() const {
    if (trials < 1) throw std::invalid_argument("sim config: trials must be >= 1");
    if (!(amplitude_std > 0.0)) throw std::invalid_argument("sim config: amplitude_std must be > 0");
    if (!(amplitude_min < amplitude_max)) throw std::invalid_argument("sim config: amplitude range empty");
    if (n0_values.empty()) throw std::invalid_argument("sim config: n0_values must be non-empty");
    for (double n0 : n0_values)
      if (!(n0 > 0.0)) throw std::invalid_argument("sim config: n0 values must be > 0");
    if (bins < 2) throw std::invalid_argument("sim config: bins must be >= 2");
  }

  BinningScheme binning() const { return BinningScheme::uniform(bins, amplitude_min, amplitude_max); }
};

struct TrialFlags {
  bool nmi_error = false;
  bool enmi_error = false;
};

struct SweepRow {
  double n0 = 0.0;
  long trials = 0;
  long nmi_errors = 0;
  long enmi_errors = 0;
  double nmi_error_rate = 0.0;
  double enmi_error_rate = 0.0;

  bool operator==(const SweepRow&) const = default;
};

struct SweepResult {
  std::vector<SweepRow> rows;

  bool operator==(const SweepResult&) const = default;
};

/// Error flags for one already-drawn trial; the u_hat = a tie case makes
/// both flags true. Exposed separately so the decision rule is testable
/// without the RNG.
inline TrialFlags classify_trial(const AmplitudeVector& capture, const AmplitudeVector& truth,
                                 const AmplitudeVector& decoy, const std::vector<double>& sigmas,
                                 const BinningScheme& binning) {
  const double nmi_truth = try_nmi(joint_standard(capture, truth, binning)).value_or(kDegenerateScore);
  const double nmi_decoy = try_nmi(joint_standard(capture, decoy, binning)).value_or(kDegenerateScore);
  const double enmi_truth =
      try_nmi(joint_likelihood(capture, truth, sigmas, binning)).value_or(kDegenerateScore);
  const double enmi_decoy =
      try_nmi(joint_likelihood(capture, decoy, sigmas, binning)).value_or(kDegenerateScore);
  return TrialFlags{nmi_decoy >= nmi_truth, enmi_decoy >= enmi_truth};
}

/// Draws one trial from the given stream and classifies it.
inline TrialFlags run_trial(GaussianStream& stream, const SimConfig& cfg, double n0,
                            const TileGrid& grid) {
  const std::size_t m = grid.count();
  const double hi = std::nextafter(cfg.amplitude_max, cfg.amplitude_min);
  const auto draw_image = [&](AmplitudeVector& out) {
    out.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
      const double v = cfg.amplitude_mean + cfg.amplitude_std * stream.next();
      out[k] = std::clamp(v, cfg.amplitude_min, hi);
    }
  };
  AmplitudeVector truth;
  AmplitudeVector decoy;
  draw_image(truth);
  draw_image(decoy);

  const NoiseSpec spec(n0);
  const std::vector<double> sigmas = tile_sigmas(grid, spec);
  AmplitudeVector capture(m);
  for (std::size_t k = 0; k < m; ++k) capture[k] = truth[k] + sigmas[k] * stream.next();

  return classify_trial(capture, truth, decoy, sigmas, cfg.binning());
}

namespace detail {

struct ErrorCounts {
  long nmi = 0;
  long enmi = 0;
};

inline ErrorCounts count_errors(const SimConfig& cfg, double n0, std::size_t n0_index,
                                const TileGrid& grid, const BinningScheme& binning, long t_begin,
                                long t_end) {
  const std::size_t m = grid.count();
  const double hi = std::nextafter(cfg.amplitude_max, cfg.amplitude_min);
  const NoiseSpec spec(n0);
  const std::vector<double> sigmas = tile_sigmas(grid, spec);
  AmplitudeVector truth(m);
  AmplitudeVector decoy(m);
  AmplitudeVector capture(m);

  ErrorCounts counts;
  for (long t = t_begin; t < t_end; ++t) {
    GaussianStream stream(substream_key(cfg.seed, static_cast<std::uint64_t>(n0_index),
                                        static_cast<std::uint64_t>(t)));
    for (std::size_t k = 0; k < m; ++k)
      truth[k] = std::clamp(cfg.amplitude_mean + cfg.amplitude_std * stream.next(), cfg.amplitude_min, hi);
    for (std::size_t k = 0; k < m; ++k)
      decoy[k] = std::clamp(cfg.amplitude_mean + cfg.amplitude_std * stream.next(), cfg.amplitude_min, hi);
    for (std::size_t k = 0; k < m; ++k) capture[k] = truth[k] + sigmas[k] * stream.next();
    const TrialFlags flags = classify_trial(capture, truth, decoy, sigmas, binning);
    counts.nmi += flags.nmi_error ? 1 : 0;
    counts.enmi += flags.enmi_error ? 1 : 0;
  }
  return counts;
}

}  // namespace detail

/// Runs the full N0 sweep. `workers` only partitions the trial range;
/// results are identical for any worker count.
inline SweepResult sweep(const SimConfig& cfg, unsigned workers = 1) {
  cfg.validate();
  const TileGrid grid = build_grid(cfg.camera, cfg.side, cfg.grid_options);
  const BinningScheme binning = cfg.binning();
  if (workers == 0) workers = 1;

  SweepResult result;
  result.rows.reserve(cfg.n0_values.size());
  for (std::size_t i = 0; i < cfg.n0_values.size(); ++i) {
    const double n0 = cfg.n0_values[i];
    const long trials = cfg.trials;
    const unsigned used = static_cast<unsigned>(
        std::min<long>(trials, static_cast<long>(workers)));
    std::vector<detail::ErrorCounts> partial(used);
    if (used <= 1) {
      partial[0] = detail::count_errors(cfg, n0, i, grid, binning, 0, trials);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(used);
      const long chunk = (trials + used - 1) / used;
      for (unsigned w = 0; w < used; ++w) {
        const long begin = static_cast<long>(w) * chunk;
        const long end = std::min<long>(trials, begin + chunk);
        pool.emplace_back([&, w, begin, end] {
          partial[w] = detail::count_errors(cfg, n0, i, grid, binning, begin, end);
        });
      }
      for (auto& th : pool) th.join();
    }
    detail::ErrorCounts total;
    for (const auto& p : partial) {
      total.nmi += p.nmi;
      total.enmi += p.enmi;
    }
    result.rows.push_back(SweepRow{n0, trials, total.nmi, total.enmi,
                                   static_cast<double>(total.nmi) / static_cast<double>(trials),
                                   static_cast<double>(total.enmi) / static_cast<double>(trials)});
  }
  return result;
}

// --- result serialization ---------------------------------------------

inline std::string sweep_csv(const SweepResult& result) {
  if (result.rows.empty()) throw std::invalid_argument("sweep_csv: empty result");
  std::string out = "n0,trials,nmi_errors,enmi_errors,nmi_error_rate,enmi_error_rate\n";
  for (const SweepRow& r : result.rows) {
    out += format_double(r.n0);
    out += ',';
    out += std::to_string(r.trials);
    out += ',';
    out += std::to_string(r.nmi_errors);
    out += ',';
    out += std::to_string(r.enmi_errors);
    out += ',';
    out += format_double(r.nmi_error_rate);
    out += ',';
    out += format_double(r.enmi_error_rate);
    out += '\n';
  }
  return out;
}

inline SweepResult parse_sweep_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "n0,trials,nmi_errors,enmi_errors,nmi_error_rate,enmi_error_rate")
    throw std::runtime_error("parse_sweep_csv: bad header");
  SweepResult result;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma == std::string::npos ? comma : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 6) throw std::runtime_error("parse_sweep_csv: bad row: " + line);
    SweepRow row;
    row.n0 = parse_double(fields[0]);
    row.trials = std::stol(fields[1]);
    row.nmi_errors = std::stol(fields[2]);
    row.enmi_errors = std::stol(fields[3]);
    row.nmi_error_rate = parse_double(fields[4]);
    row.enmi_error_rate = parse_double(fields[5]);
    result.rows.push_back(row);
  }
  return result;
}

namespace detail {

// Maps sweep rows onto an 800x520 canvas, x log-scaled.
inline std::string sweep_svg(const SweepResult& result) {
  const double width = 800, height = 520;
  const double ml = 70, mr = 20, mt = 20, mb = 60;
  const double pw = width - ml - mr, ph = height - mt - mb;

  double x_lo = result.rows.front().n0, x_hi = x_lo;
  double y_hi = 0.0;
  for (const SweepRow& r : result.rows) {
    x_lo = std::min(x_lo, r.n0);
    x_hi = std::max(x_hi, r.n0);
    y_hi = std::max({y_hi, r.nmi_error_rate, r.enmi_error_rate});
  }
  if (x_lo == x_hi) x_hi = x_lo * 10.0;  // degenerate single-x plot
  y_hi = std::max(0.6, y_hi * 1.05);
  const double lx_lo = std::log10(x_lo), lx_hi = std::log10(x_hi);

  const auto px = [&](double n0) { return ml + (std::log10(n0) - lx_lo) / (lx_hi - lx_lo) * pw; };
  const auto py = [&](double rate) { return mt + ph - rate / y_hi * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // decade gridlines + x tick labels
  for (int e = static_cast<int>(std::floor(lx_lo)); e <= static_cast<int>(std::ceil(lx_hi)); ++e) {
    const double n0 = std::pow(10.0, e);
    if (n0 < x_lo * 0.999 || n0 > x_hi * 1.001) continue;
    const double x = px(n0);
    svg << "<line x1=\"" << x << "\" y1=\"" << mt << "\" x2=\"" << x << "\" y2=\"" << mt + ph
        << "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n"
        << "<text x=\"" << x << "\" y=\"" << mt + ph + 18
        << "\" font-size=\"12\" text-anchor=\"middle\">1e" << e << "</text>\n";
  }
  // horizontal gridlines every 0.1
  for (int i = 0; i * 0.1 <= y_hi + 1e-9; ++i) {
    const double r = i * 0.1;
    const double y = py(r);
    char label[16];
    std::snprintf(label, sizeof(label), "%.1f", r);
    svg << "<line x1=\"" << ml << "\" y1=\"" << y << "\" x2=\"" << ml + pw << "\" y2=\"" << y
        << "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n"
        << "<text x=\"" << ml - 8 << "\" y=\"" << y + 4
        << "\" font-size=\"12\" text-anchor=\"end\">" << label << "</text>\n";
  }
  svg << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  const auto polyline = [&](bool enmi_curve, const char* stroke, const char* dash) {
    svg << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"2\"";
    if (dash[0] != '\0') svg << " stroke-dasharray=\"" << dash << "\"";
    svg << " points=\"";
    for (const SweepRow& r : result.rows)
      svg << px(r.n0) << "," << py(enmi_curve ? r.enmi_error_rate : r.nmi_error_rate) << " ";
    svg << "\"/>\n";
  };
  polyline(false, "#1f4ecc", "7 4");
  polyline(true, "black", "");

  svg << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 14
      << "\" font-size=\"14\" text-anchor=\"middle\">Power Spectral Density, N0</text>\n"
      << "<text x=\"18\" y=\"" << mt + ph / 2
      << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << mt + ph / 2
      << ")\">Probability of Error</text>\n"
      << "<line x1=\"" << ml + 14 << "\" y1=\"" << mt + 16 << "\" x2=\"" << ml + 54 << "\" y2=\""
      << mt + 16 << "\" stroke=\"#1f4ecc\" stroke-width=\"2\" stroke-dasharray=\"7 4\"/>\n"
      << "<text x=\"" << ml + 60 << "\" y=\"" << mt + 20 << "\" font-size=\"13\">NMI</text>\n"
      << "<line x1=\"" << ml + 14 << "\" y1=\"" << mt + 36 << "\" x2=\"" << ml + 54 << "\" y2=\""
      << mt + 36 << "\" stroke=\"black\" stroke-width=\"2\"/>\n"
      << "<text x=\"" << ml + 60 << "\" y=\"" << mt + 40 << "\" font-size=\"13\">ENMI</text>\n"
      << "</svg>\n";
  return svg.str();
}

}  // namespace detail

/// Writes the sweep as CSV and, when svg_path is non-empty, an SVG line
/// plot with a log-scale x axis. Both writes are atomic.
inline void emit_curves(const SweepResult& result, const std::filesystem::path& csv_path,
                        const std::filesystem::path& svg_path = {}) {
  if (result.rows.empty()) throw std::invalid_argument("emit_curves: empty result");
  atomic_write_file(csv_path, sweep_csv(result));
  if (!svg_path.empty()) atomic_write_file(svg_path, detail::sweep_svg(result));
}

}  // namespace enmi
