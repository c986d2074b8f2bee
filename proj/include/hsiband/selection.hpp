#pragma once

/*
 * Two-stage band selection.
 *
 *   1. Relevance: keep bands whose MI with the ground truth reaches
 *      th_relevance, ordered by ascending MI (S).
 *   2. Redundancy: greedy pass over the pairwise Symmetric Uncertainty table
 *      of S. The least redundant remaining pair is consumed each round; each
 *      member joins SS only if its U with every band already in SS stays
 *      below th_redundancy.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include "hsiband/core.hpp"
#include "hsiband/error.hpp"
#include "hsiband/infotheory.hpp"

namespace hsiband {

/// Upper-triangular table of pairwise U over positions of S. Cells hold a
/// genuine U in [0, 1] or the sentinel 2.0 once consumed.
class SUMatrix {
 public:
  static constexpr double kSentinel = 2.0;

  SUMatrix() = default;
  explicit SUMatrix(std::size_t n) : n_(n), cells_(n * n, kSentinel) {}

  std::size_t size() const noexcept { return n_; }

  double at(std::size_t i, std::size_t j) const {
    check(i, j);
    return i < j ? cells_[i * n_ + j] : cells_[j * n_ + i];
  }

  void set(std::size_t i, std::size_t j, double value) {
    check(i, j);
    (i < j ? cells_[i * n_ + j] : cells_[j * n_ + i]) = value;
  }

  bool consumed(std::size_t i, std::size_t j) const { return at(i, j) == kSentinel; }

  /// Smallest genuine cell, ties resolved to the lexicographically smallest (i, j).
  std::optional<std::pair<std::size_t, std::size_t>> argmin() const {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    double best_value = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j) {
        const double v = cells_[i * n_ + j];
        if (v != kSentinel && v < best_value) {
          best_value = v;
          best = {i, j};
        }
      }
    return best;
  }

 private:
  void check(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_ || i == j)
      fail(ErrorKind::invalid_argument, "SU matrix cell index out of range or on the diagonal");
  }

  std::size_t n_ = 0;
  std::vector<double> cells_;
};

inline std::vector<BandIndex> relevance_filter(std::span<const double> mi_per_band,
                                               double th_relevance) {
  std::vector<BandIndex> kept;
  for (BandIndex b = 0; b < mi_per_band.size(); ++b)
    if (mi_per_band[b] >= th_relevance) kept.push_back(b);
  std::stable_sort(kept.begin(), kept.end(), [&](BandIndex a, BandIndex b) {
    return mi_per_band[a] < mi_per_band[b];
  });
  return kept;
}

/*
 * BandStatistics
 *
 * Quantized codes, per-band entropies and the MI curve for one
 * (cube, gt, bins, scope) combination, plus a memo of every pairwise U
 * computed so far. Repeated selections over the same data (threshold
 * sweeps) reuse the memo.
 */
class BandStatistics {
 public:
  BandStatistics(const BandCube& cube, const GroundTruthMap& gt, std::size_t bins,
                 SuScope scope)
      : n_bands_(cube.n_bands()),
        su_cache_(cube.n_bands() * cube.n_bands(), std::numeric_limits<double>::quiet_NaN()) {
    validate_pair(cube, gt);
    const auto quantized = quantize_cube(cube, bins);

    mi_.reserve(n_bands_);
    for (const auto& q : quantized) mi_.push_back(mi_with_labels(q, gt));

    std::vector<PixelIndex> pixels;
    if (scope == SuScope::labeled_only) {
      pixels = gt.labeled_pixels();
    } else {
      pixels.resize(gt.pixels());
      std::iota(pixels.begin(), pixels.end(), PixelIndex{0});
    }
    codes_.reserve(n_bands_);
    entropy_.reserve(n_bands_);
    for (const auto& q : quantized) {
      std::vector<Code> restricted;
      restricted.reserve(pixels.size());
      for (PixelIndex p : pixels) restricted.push_back(q.codes[p]);
      entropy_.push_back(entropy(std::span<const Code>(restricted)));
      codes_.push_back(std::move(restricted));
    }
  }

  std::size_t n_bands() const noexcept { return n_bands_; }
  const std::vector<double>& mi_per_band() const noexcept { return mi_; }

  /// U between two bands over the configured pixel scope. Not memoized.
  double symmetric_uncertainty(BandIndex a, BandIndex b) const {
    MIEstimate est;
    est.h_a = entropy_[a];
    est.h_b = entropy_[b];
    est.h_ab = joint_entropy(std::span<const Code>(codes_[a]), std::span<const Code>(codes_[b]));
    est.mi = std::max(0.0, est.h_a + est.h_b - est.h_ab);
    return hsiband::symmetric_uncertainty(est);
  }

  /// Fill D over the positions of `relevant`. Missing cells are computed by
  /// up to `workers` threads; each cell is independent so the result does not
  /// depend on the worker count.
  SUMatrix su_matrix(std::span<const BandIndex> relevant, unsigned workers = 1) {
    for (BandIndex b : relevant)
      if (b >= n_bands_) fail(ErrorKind::invalid_argument, "band index out of range");

    std::vector<std::pair<BandIndex, BandIndex>> missing;
    for (std::size_t i = 0; i < relevant.size(); ++i)
      for (std::size_t j = i + 1; j < relevant.size(); ++j)
        if (std::isnan(cached(relevant[i], relevant[j])))
          missing.emplace_back(std::min(relevant[i], relevant[j]),
                               std::max(relevant[i], relevant[j]));
    std::sort(missing.begin(), missing.end());
    missing.erase(std::unique(missing.begin(), missing.end()), missing.end());

    std::vector<double> values(missing.size());
    const auto work = [&](std::size_t first, std::size_t stride) {
      for (std::size_t k = first; k < missing.size(); k += stride)
        values[k] = symmetric_uncertainty(missing[k].first, missing[k].second);
    };
    const std::size_t n_workers = std::max<std::size_t>(1, std::min<std::size_t>(workers, missing.size()));
    if (n_workers == 1) {
      work(0, 1);
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(work, w, n_workers);
    }
    for (std::size_t k = 0; k < missing.size(); ++k) {
      su_cache_[missing[k].first * n_bands_ + missing[k].second] = values[k];
      su_cache_[missing[k].second * n_bands_ + missing[k].first] = values[k];
    }

    SUMatrix d(relevant.size());
    for (std::size_t i = 0; i < relevant.size(); ++i)
      for (std::size_t j = i + 1; j < relevant.size(); ++j)
        d.set(i, j, cached(relevant[i], relevant[j]));
    return d;
  }

 private:
  double cached(BandIndex a, BandIndex b) const { return su_cache_[a * n_bands_ + b]; }

  std::size_t n_bands_;
  std::vector<double> mi_;
  std::vector<std::vector<Code>> codes_;
  std::vector<double> entropy_;
  std::vector<double> su_cache_;
};

inline SUMatrix build_su_matrix(const BandCube& cube, const GroundTruthMap& gt,
                                std::span<const BandIndex> relevant, std::size_t bins,
                                SuScope scope, unsigned workers = 1) {
  BandStatistics stats(cube, gt, bins, scope);
  return stats.su_matrix(relevant, workers);
}

/// Greedy redundancy elimination over D (taken by value; the caller's copy is
/// untouched). Returns the admitted bands of `relevant` in admission order.
inline std::vector<BandIndex> redundancy_eliminate(SUMatrix d,
                                                   std::span<const BandIndex> relevant,
                                                   double th_redundancy) {
  if (!(th_redundancy > 0.0 && th_redundancy <= 1.0))
    fail(ErrorKind::invalid_argument, "th_redundancy must lie in (0, 1]");
  if (d.size() != relevant.size())
    fail(ErrorKind::length_mismatch, "SU matrix size differs from the relevant set");

  const SUMatrix original = d;
  std::vector<std::size_t> admitted;  // positions in `relevant`
  std::vector<bool> in_ss(relevant.size(), false);

  const auto try_admit = [&](std::size_t candidate) {
    if (in_ss[candidate]) return;
    for (std::size_t l : admitted)
      if (!(original.at(candidate, l) < th_redundancy)) return;
    in_ss[candidate] = true;
    admitted.push_back(candidate);
  };

  // Each round consumes one cell, so at most n(n-1)/2 rounds.
  while (const auto cell = d.argmin()) {
    const auto [x, y] = *cell;
    if (!(d.at(x, y) < th_redundancy)) break;
    try_admit(x);
    try_admit(y);
    d.set(x, y, SUMatrix::kSentinel);
  }

  std::vector<BandIndex> out;
  out.reserve(admitted.size());
  for (std::size_t pos : admitted) out.push_back(relevant[pos]);
  return out;
}

/// Full pipeline over precomputed statistics.
inline SelectionResult select_bands(BandStatistics& stats, const SelectionConfig& config,
                                    unsigned workers = 1) {
  config.validate();
  SelectionResult result;
  result.config = config;
  result.mi_per_band = stats.mi_per_band();
  result.relevant_ordered = relevance_filter(result.mi_per_band, config.th_relevance);
  if (result.relevant_ordered.empty()) return result;

  const SUMatrix d = stats.su_matrix(result.relevant_ordered, workers);
  result.admission_order = redundancy_eliminate(d, result.relevant_ordered, config.th_redundancy);
  result.selected = result.admission_order;
  std::sort(result.selected.begin(), result.selected.end());
  return result;
}

inline SelectionResult select_bands(const BandCube& cube, const GroundTruthMap& gt,
                                    const SelectionConfig& config, unsigned workers = 1) {
  config.validate();
  BandStatistics stats(cube, gt, config.bins, config.su_scope);
  return select_bands(stats, config, workers);
}

}  // namespace hsiband
