#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace enmi {

/// Amplitude binning: B >= 2 bins delimited by B+1 strictly increasing
/// edges. Bins are half-open [e_i, e_{i+1}); values outside the edge range
/// clamp into the extreme bins (saturating-sensor semantics).
class BinningScheme {
 public:
  explicit BinningScheme(std::vector<double> edges) : edges_(std::move(edges)) {
    if (edges_.size() < 3) throw std::invalid_argument("binning: need at least 2 bins");
    for (std::size_t i = 0; i + 1 < edges_.size(); ++i)
      if (!(edges_[i] < edges_[i + 1]))
        throw std::invalid_argument("binning: edges must be strictly increasing");
    min_width_ = edges_[1] - edges_[0];
    for (std::size_t i = 1; i + 1 < edges_.size(); ++i)
      min_width_ = std::min(min_width_, edges_[i + 1] - edges_[i]);
  }

  static BinningScheme uniform(int bins, double lo, double hi) {
    if (bins < 2) throw std::invalid_argument("binning: need at least 2 bins");
    if (!(lo < hi)) throw std::invalid_argument("binning: lo must be < hi");
    std::vector<double> edges(static_cast<std::size_t>(bins) + 1);
    for (int i = 0; i <= bins; ++i) edges[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / bins;
    return BinningScheme(std::move(edges));
  }

  int bin_count() const { return static_cast<int>(edges_.size()) - 1; }
  const std::vector<double>& edges() const { return edges_; }
  double min_width() const { return min_width_; }

  int bin_index(double v) const {
    if (v < edges_.front()) return 0;
    if (v >= edges_.back()) return bin_count() - 1;
    auto it = std::upper_bound(edges_.begin(), edges_.end(), v);
    return static_cast<int>(it - edges_.begin()) - 1;
  }

 private:
  std::vector<double> edges_;
  double min_width_ = 0.0;
};

}  // namespace enmi
