// Empirical per-pixel variance between aligned capture/prior image pairs:
// Var[i,j] = 1/(n-1) * sum_k (a_ij^(k) - a~_ij^(k))^2. The difference is
// taken about the prior, not the sample mean; this estimates the noise
// about the reference rather than the classical variance about the
// empirical mean. Pairs must be pre-aligned by the supplier.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "enmi/image.hpp"

namespace enmi {

struct VarianceMask {
  int width = 0;
  int height = 0;
  std::vector<double> variance;    // row-major, amplitude^2
  std::vector<std::uint8_t> valid; // empty means every pixel is valid
  long sample_count = 0;           // n

  bool is_valid(int row, int col) const {
    if (valid.empty()) return true;
    return valid[static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
                 static_cast<std::size_t>(col)] != 0;
  }
};

/// Streaming accumulator over image pairs; per-pixel sums of squared
/// differences are plain additions, so any partitioning of the pairs
/// yields the same mask.
class MaskAccumulator {
 public:
  void add_pair(const GrayImage& local, const GrayImage& prior) {
    if (local.width != prior.width || local.height != prior.height)
      throw std::invalid_argument("variance mask: local/prior dimensions differ");
    if (count_ == 0) {
      width_ = local.width;
      height_ = local.height;
      sum_sq_.assign(local.pixels.size(), 0.0);
    } else if (local.width != width_ || local.height != height_) {
      throw std::invalid_argument("variance mask: pair dimensions differ from previous pairs");
    }
    for (std::size_t i = 0; i < sum_sq_.size(); ++i) {
      const double d = static_cast<double>(local.pixels[i]) - static_cast<double>(prior.pixels[i]);
      sum_sq_[i] += d * d;
    }
    ++count_;
  }

  long pair_count() const { return count_; }

  VarianceMask finalize() const {
    if (count_ < 2)
      throw std::domain_error("variance mask: need at least 2 aligned pairs (n >= 2)");
    VarianceMask mask;
    mask.width = width_;
    mask.height = height_;
    mask.sample_count = count_;
    mask.variance.resize(sum_sq_.size());
    const double scale = 1.0 / static_cast<double>(count_ - 1);
    for (std::size_t i = 0; i < sum_sq_.size(); ++i) mask.variance[i] = sum_sq_[i] * scale;
    return mask;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> sum_sq_;
  long count_ = 0;
};

/// Batch form of the accumulator. An optional validity image marks pixels
/// to exclude (zero = invalid); excluded pixels report variance 0 and are
/// flagged in the mask.
inline VarianceMask accumulate_mask(const std::vector<std::pair<GrayImage, GrayImage>>& pairs,
                                    const GrayImage* validity = nullptr) {
  MaskAccumulator acc;
  for (const auto& [local, prior] : pairs) acc.add_pair(local, prior);
  VarianceMask mask = acc.finalize();
  if (validity != nullptr) {
    if (validity->width != mask.width || validity->height != mask.height)
      throw std::invalid_argument("variance mask: validity image dimensions differ");
    mask.valid.resize(mask.variance.size());
    for (std::size_t i = 0; i < mask.variance.size(); ++i) {
      mask.valid[i] = validity->pixels[i] != 0 ? 1 : 0;
      if (!mask.valid[i]) mask.variance[i] = 0.0;
    }
  }
  return mask;
}

/// Min-max normalizes the mask to [0, 255] for inspection; an all-equal
/// mask maps to 0, invalid pixels render as 0.
inline GrayImage mask_preview(const VarianceMask& mask) {
  GrayImage img(mask.width, mask.height, 0);
  double lo = 0.0, hi = 0.0;
  bool seen = false;
  for (int r = 0; r < mask.height; ++r)
    for (int c = 0; c < mask.width; ++c) {
      if (!mask.is_valid(r, c)) continue;
      const double v = mask.variance[static_cast<std::size_t>(r) * mask.width + c];
      if (!seen) {
        lo = hi = v;
        seen = true;
      } else {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  if (!seen || hi == lo) return img;
  for (int r = 0; r < mask.height; ++r)
    for (int c = 0; c < mask.width; ++c) {
      if (!mask.is_valid(r, c)) continue;
      const double v = mask.variance[static_cast<std::size_t>(r) * mask.width + c];
      img.at(r, c) = static_cast<std::uint8_t>(std::lround((v - lo) / (hi - lo) * 255.0));
    }
  return img;
}

}  // namespace enmi
