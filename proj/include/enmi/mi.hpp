// Joint amplitude histograms and the normalized mutual information score.
//
// Two joint builders share one scoring path. joint_standard bins each
// positionally paired (capture, map) tile with unit weight. In
// joint_likelihood a noisy capture tile contributes its posterior weight
// vector over amplitude bins instead (spread grows with sigma_k, i.e.
// shrinks with effective SNR), while the noiseless map side keeps unit
// weight. NMI = (H[A] + H[B]) / H[A,B] on the normalized joint; the
// likelihood-weighted variant of that score is the ENMI.

#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "enmi/binning.hpp"
#include "enmi/noise.hpp"

namespace enmi {

using AmplitudeVector = std::vector<double>;

/// B x B nonnegative weight matrix over (capture-bin, map-bin) pairs,
/// row-major with the capture axis on rows. `total` is the accumulated
/// weight before normalization; entries sum to 1 afterwards.
struct JointHistogram {
  int bins = 0;
  std::vector<double> weights;  // bins*bins, row-major (capture, map)
  double total = 0.0;

  double& at(int capture_bin, int map_bin) {
    return weights[static_cast<std::size_t>(capture_bin) * static_cast<std::size_t>(bins) +
                   static_cast<std::size_t>(map_bin)];
  }
  double at(int capture_bin, int map_bin) const {
    return weights[static_cast<std::size_t>(capture_bin) * static_cast<std::size_t>(bins) +
                   static_cast<std::size_t>(map_bin)];
  }
};

/// Unit-weight joint: each pair adds 1 to (bin(capture_k), bin(map_k));
/// out-of-range values clamp to the extreme bins; normalized by length.
inline JointHistogram joint_standard(const AmplitudeVector& capture, const AmplitudeVector& map,
                                     const BinningScheme& binning) {
  if (capture.size() != map.size())
    throw std::invalid_argument("joint_standard: capture/map length mismatch");
  if (capture.empty()) throw std::invalid_argument("joint_standard: empty vectors");
  const int b = binning.bin_count();
  JointHistogram hist{b, std::vector<double>(static_cast<std::size_t>(b) * b, 0.0), 0.0};
  for (std::size_t k = 0; k < capture.size(); ++k)
    hist.at(binning.bin_index(capture[k]), binning.bin_index(map[k])) += 1.0;
  hist.total = static_cast<double>(capture.size());
  for (double& w : hist.weights) w /= hist.total;
  return hist;
}

/// Likelihood-weighted joint: pair k spreads bin_posterior(capture_k,
/// sigma_k) along the capture axis within the fixed column bin(map_k).
/// With every sigma_k = 0 this reduces to joint_standard bit-for-bit.
inline JointHistogram joint_likelihood(const AmplitudeVector& capture, const AmplitudeVector& map,
                                       const std::vector<double>& sigmas,
                                       const BinningScheme& binning) {
  if (capture.size() != map.size() || capture.size() != sigmas.size())
    throw std::invalid_argument("joint_likelihood: capture/map/sigmas length mismatch");
  if (capture.empty()) throw std::invalid_argument("joint_likelihood: empty vectors");
  const int b = binning.bin_count();
  JointHistogram hist{b, std::vector<double>(static_cast<std::size_t>(b) * b, 0.0), 0.0};
  std::vector<double> column(static_cast<std::size_t>(b), 0.0);
  for (std::size_t k = 0; k < capture.size(); ++k) {
    std::fill(column.begin(), column.end(), 0.0);
    detail::accumulate_posterior(capture[k], sigmas[k], binning, 1.0, column.data());
    const int map_bin = binning.bin_index(map[k]);
    for (int i = 0; i < b; ++i)
      if (column[static_cast<std::size_t>(i)] != 0.0) hist.at(i, map_bin) += column[static_cast<std::size_t>(i)];
  }
  hist.total = static_cast<double>(capture.size());
  for (double& w : hist.weights) w /= hist.total;
  return hist;
}

/// Shannon entropy in bits of a PMF (weights must be nonnegative and sum
/// to 1 within 1e-9); 0*log 0 = 0.
inline double entropy(std::span<const double> pmf) {
  double sum = 0.0;
  double h = 0.0;
  for (double p : pmf) {
    if (p < 0.0) throw std::domain_error("entropy: negative weight");
    sum += p;
    if (p > 0.0) h -= p * std::log2(p);
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::domain_error("entropy: weights must sum to 1");
  return h;
}

/// NMI of a normalized joint histogram, or nothing when the histogram is
/// degenerate (all mass in one cell, H[A,B] = 0, score undefined).
inline std::optional<double> try_nmi(const JointHistogram& hist) {
  const int b = hist.bins;
  std::vector<double> pa(static_cast<std::size_t>(b), 0.0);
  std::vector<double> pb(static_cast<std::size_t>(b), 0.0);
  for (int i = 0; i < b; ++i)
    for (int j = 0; j < b; ++j) {
      const double w = hist.at(i, j);
      if (w < 0.0) throw std::domain_error("nmi: negative weight");
      pa[static_cast<std::size_t>(i)] += w;
      pb[static_cast<std::size_t>(j)] += w;
    }
  const double h_joint = entropy(hist.weights);
  if (h_joint <= 0.0) return std::nullopt;
  return (entropy(pa) + entropy(pb)) / h_joint;
}

struct DegenerateHistogramError : std::domain_error {
  DegenerateHistogramError() : std::domain_error("nmi: degenerate histogram (single occupied cell)") {}
};

// Matching-context policy for a degenerate joint: a perfectly constant
// pair of images counts as a perfect match.
constexpr double kDegenerateScore = 2.0;

/// NMI in [1, 2]; throws DegenerateHistogramError when undefined.
inline double nmi(const JointHistogram& hist) {
  const auto value = try_nmi(hist);
  if (!value) throw DegenerateHistogramError{};
  return *value;
}

/// ENMI: NMI of the likelihood-weighted joint.
inline double enmi_score(const AmplitudeVector& capture, const AmplitudeVector& map,
                         const std::vector<double>& sigmas, const BinningScheme& binning) {
  return nmi(joint_likelihood(capture, map, sigmas, binning));
}

}  // namespace enmi
