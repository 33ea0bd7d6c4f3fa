// Acquisition-noise statistics. The sensor noise is 2-D white with power
// spectral density N0; a tile whose focal-plane footprint is A~ sees an
// additive zero-mean Gaussian with variance sigma^2 = N0 / A~ on its
// (area-normalized) amplitude, so small/far tiles are noisier.

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "enmi/binning.hpp"

namespace enmi {

/// Power spectral density of the focal-plane acquisition noise.
struct NoiseSpec {
  double psd = 0.0;  // N0, amplitude^2 * cm^2

  explicit NoiseSpec(double n0) : psd(n0) {
    if (!(n0 > 0.0)) throw std::invalid_argument("noise: psd must be > 0");
  }
};

/// Per-tile Gaussian noise level.
struct TileNoise {
  double variance = 0.0;  // sigma_k^2
  double std = 0.0;       // sigma_k
};

inline TileNoise tile_variance(double projected_area, const NoiseSpec& spec) {
  if (!(projected_area > 0.0)) throw std::domain_error("tile_variance: area must be > 0");
  const double var = spec.psd / projected_area;
  return TileNoise{var, std::sqrt(var)};
}

/// Effective SNR of a uniform-amplitude tile: a^2 * A~ / N0.
inline double effective_snr(double amplitude, double projected_area, const NoiseSpec& spec) {
  if (!(projected_area > 0.0)) throw std::domain_error("effective_snr: area must be > 0");
  return amplitude * amplitude * projected_area / spec.psd;
}

/// Gaussian likelihood of tile amplitude a_k given observation v_k.
inline double tile_likelihood(double a_k, double v_k, const TileNoise& noise) {
  if (!(noise.variance > 0.0)) throw std::domain_error("tile_likelihood: variance must be > 0");
  constexpr double inv_sqrt_2pi = 0.3989422804014327;
  const double d = a_k - v_k;
  return (inv_sqrt_2pi / noise.std) * std::exp(-d * d / (2.0 * noise.variance));
}

/// Standard normal CDF via the complementary error function.
inline double normal_cdf(double t) {
  constexpr double inv_sqrt2 = 0.7071067811865475244;
  return 0.5 * std::erfc(-t * inv_sqrt2);
}

namespace detail {

// sigma below this fraction of the narrowest bin collapses the posterior
// to a point mass on the bin containing v (and makes the sigma=0 joint
// reduce to the unit-weight joint bit-for-bit).
constexpr double kDegenerateSigmaFraction = 1e-6;

// Adds the posterior bin weights for observation v with noise level sigma
// onto out[0..B-1] (scaled by `scale`). Interior weights are CDF
// differences; the extreme bins absorb the Gaussian tails, so the added
// mass is exactly `scale`. Bins further than 9 sigma from v receive
// negligible (< 1e-18) mass and are skipped.
inline void accumulate_posterior(double v, double sigma, const BinningScheme& binning,
                                 double scale, double* out) {
  const int b = binning.bin_count();
  if (!(sigma > binning.min_width() * kDegenerateSigmaFraction)) {
    out[binning.bin_index(v)] += scale;
    return;
  }
  const double span = 9.0 * sigma;
  int first = binning.bin_index(v - span);
  int last = binning.bin_index(v + span);
  double cdf_lo = (first == 0) ? 0.0 : normal_cdf((binning.edges()[static_cast<std::size_t>(first)] - v) / sigma);
  for (int i = first; i <= last; ++i) {
    const double cdf_hi =
        (i == b - 1) ? 1.0 : normal_cdf((binning.edges()[static_cast<std::size_t>(i + 1)] - v) / sigma);
    out[i] += scale * (cdf_hi - cdf_lo);
    cdf_lo = cdf_hi;
  }
  // mass below `first` / above `last` that was not swept by the loop
  if (first > 0) {
    const double below = normal_cdf((binning.edges()[static_cast<std::size_t>(first)] - v) / sigma);
    out[0] += scale * below;
  }
  if (last < b - 1) {
    const double above = 1.0 - normal_cdf((binning.edges()[static_cast<std::size_t>(last + 1)] - v) / sigma);
    out[b - 1] += scale * above;
  }
}

}  // namespace detail

/// Posterior weight of each amplitude bin for a noisy tile observation v_k
/// under a uniform prior over bins: interior bins get CDF differences, the
/// extreme bins absorb the tails, so the weights sum to 1.
inline std::vector<double> bin_posterior(double v_k, const TileNoise& noise,
                                         const BinningScheme& binning) {
  std::vector<double> w(static_cast<std::size_t>(binning.bin_count()), 0.0);
  detail::accumulate_posterior(v_k, noise.std, binning, 1.0, w.data());
  return w;
}

}  // namespace enmi
