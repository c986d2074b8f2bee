#pragma once

/*
 * Histogram estimators for discrete random variables.
 *
 * All quantities are in bits (log base 2) and use empirical frequencies with
 * the 0 log 0 = 0 convention. Continuous bands are discretized by per-band
 * min-max linear quantization before any estimate is taken.
 */

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hsiband/core.hpp"
#include "hsiband/error.hpp"

namespace hsiband {

using Code = std::uint32_t;

struct QuantizedBand {
  std::vector<Code> codes;
  std::size_t bins = 0;
};

struct MIEstimate {
  double h_a = 0.0;
  double h_b = 0.0;
  double h_ab = 0.0;
  double mi = 0.0;
};

struct FanoBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// q(v) = min(bins-1, floor((v - vmin) * bins / (vmax - vmin))), 0 for a flat band.
inline QuantizedBand quantize(std::span<const double> values, std::size_t bins) {
  if (bins < 2) fail(ErrorKind::invalid_argument, "quantize needs bins >= 2");
  QuantizedBand out{std::vector<Code>(values.size(), 0), bins};
  if (values.empty()) return out;
  for (double v : values)
    if (!std::isfinite(v)) fail(ErrorKind::non_finite, "quantize input contains a non-finite value");

  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double vmin = *lo_it;
  const double vmax = *hi_it;
  if (vmax == vmin) return out;

  const double range = vmax - vmin;
  const double scale = static_cast<double>(bins);
  const auto top = static_cast<Code>(bins - 1);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double cell = std::floor((values[i] - vmin) * scale / range);
    out.codes[i] = std::min(top, static_cast<Code>(cell));
  }
  return out;
}

namespace detail {

inline double entropy_from_counts(std::span<const std::uint64_t> counts, std::size_t total) {
  const double n = static_cast<double>(total);
  double h = 0.0;
  for (std::uint64_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

template <std::unsigned_integral T>
std::size_t alphabet_of(std::span<const T> codes) {
  return codes.empty() ? 0 : static_cast<std::size_t>(*std::max_element(codes.begin(), codes.end())) + 1;
}

// Dense count tables above this many cells fall back to sort-and-count.
inline constexpr std::size_t kDenseCountLimit = std::size_t{1} << 22;

}  // namespace detail

template <std::unsigned_integral T>
double entropy(std::span<const T> codes, std::size_t alphabet) {
  if (codes.empty()) fail(ErrorKind::empty_input, "entropy of an empty sequence");
  for (T c : codes)
    if (static_cast<std::size_t>(c) >= alphabet)
      fail(ErrorKind::invalid_argument, "code exceeds declared alphabet");
  if (alphabet > detail::kDenseCountLimit) {
    std::vector<T> sorted(codes.begin(), codes.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::uint64_t> counts;
    for (std::size_t i = 0; i < sorted.size();) {
      std::size_t j = i;
      while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
      counts.push_back(j - i);
      i = j;
    }
    return detail::entropy_from_counts(counts, codes.size());
  }
  std::vector<std::uint64_t> counts(alphabet, 0);
  for (T c : codes) ++counts[c];
  return detail::entropy_from_counts(counts, codes.size());
}

template <std::unsigned_integral T>
double entropy(std::span<const T> codes) {
  return entropy(codes, detail::alphabet_of(codes));
}

template <std::unsigned_integral T, std::unsigned_integral U>
double joint_entropy(std::span<const T> a, std::span<const U> b) {
  if (a.size() != b.size())
    fail(ErrorKind::length_mismatch, "joint entropy of sequences with different lengths");
  if (a.empty()) fail(ErrorKind::empty_input, "joint entropy of empty sequences");

  const std::size_t alpha_a = detail::alphabet_of(a);
  const std::size_t alpha_b = detail::alphabet_of(b);
  if (alpha_a <= detail::kDenseCountLimit / alpha_b) {
    std::vector<std::uint64_t> counts(alpha_a * alpha_b, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
      ++counts[static_cast<std::size_t>(a[i]) * alpha_b + b[i]];
    return detail::entropy_from_counts(counts, a.size());
  }

  // Sparse path: sorted (a, b) keys visit nonzero cells in the same order as
  // the dense table would.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> keys(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) keys[i] = {a[i], b[i]};
  std::sort(keys.begin(), keys.end());
  std::vector<std::uint64_t> counts;
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    counts.push_back(j - i);
    i = j;
  }
  return detail::entropy_from_counts(counts, a.size());
}

template <std::unsigned_integral T, std::unsigned_integral U>
MIEstimate mutual_information(std::span<const T> a, std::span<const U> b) {
  if (a.size() != b.size())
    fail(ErrorKind::length_mismatch, "mutual information of sequences with different lengths");
  if (a.empty()) fail(ErrorKind::empty_input, "mutual information of empty sequences");
  MIEstimate est;
  est.h_a = entropy(a);
  est.h_b = entropy(b);
  est.h_ab = joint_entropy(a, b);
  // Rounding can leave a residue of order 1e-16 below zero.
  est.mi = std::max(0.0, est.h_a + est.h_b - est.h_ab);
  return est;
}

/// U(A,B) = 2 I(A;B) / (H(A) + H(B)); two constant inputs count as fully redundant.
inline double symmetric_uncertainty(const MIEstimate& est) {
  const double denom = est.h_a + est.h_b;
  if (denom == 0.0) return 1.0;
  return 2.0 * est.mi / denom;
}

template <std::unsigned_integral T, std::unsigned_integral U>
double symmetric_uncertainty(std::span<const T> a, std::span<const U> b) {
  return symmetric_uncertainty(mutual_information(a, b));
}

/// Fano bounds on classification error from H(C) and I(C;X), with log2(n_classes)
/// as the denominator of both sides.
inline FanoBounds fano_bounds(double h_c, double i_cx, std::size_t n_classes) {
  if (n_classes < 2) fail(ErrorKind::invalid_argument, "Fano bounds need at least two classes");
  if (!(h_c >= 0.0) || !(i_cx >= 0.0) || i_cx > h_c + 1e-12)
    fail(ErrorKind::invalid_argument, "Fano bounds need h_c >= 0 and 0 <= i_cx <= h_c");
  const double denom = std::log2(static_cast<double>(n_classes));
  const auto unit = [](double x) { return std::clamp(x, 0.0, 1.0); };
  const double h_cond = h_c - i_cx;
  return FanoBounds{unit((h_cond - 1.0) / denom), unit(h_cond / denom)};
}

/// Quantize every band of the cube over all of its pixels.
inline std::vector<QuantizedBand> quantize_cube(const BandCube& cube, std::size_t bins) {
  std::vector<QuantizedBand> out;
  out.reserve(cube.n_bands());
  for (BandIndex b = 0; b < cube.n_bands(); ++b) out.push_back(quantize(cube.band(b), bins));
  return out;
}

/// MI between a quantized band and the class labels, over labeled pixels only.
inline double mi_with_labels(const QuantizedBand& band, const GroundTruthMap& gt) {
  if (band.codes.size() != gt.pixels())
    fail(ErrorKind::dimension_mismatch, "band and ground truth pixel counts differ");
  std::vector<Code> codes;
  std::vector<Label> labels;
  for (PixelIndex p = 0; p < gt.pixels(); ++p) {
    if (gt.at(p) == 0) continue;
    codes.push_back(band.codes[p]);
    labels.push_back(gt.at(p));
  }
  if (codes.empty()) fail(ErrorKind::degenerate_gt, "ground truth has no labeled pixels");
  return mutual_information(std::span<const Code>(codes), std::span<const Label>(labels)).mi;
}

inline double mi_with_gt(const BandCube& cube, const GroundTruthMap& gt, BandIndex band,
                         std::size_t bins) {
  validate_pair(cube, gt);
  return mi_with_labels(quantize(cube.band(band), bins), gt);
}

/// Entropy of the class labels over labeled pixels, H(C).
inline double class_entropy(const GroundTruthMap& gt) {
  std::vector<Label> labels;
  for (Label l : gt.labels())
    if (l != 0) labels.push_back(l);
  return entropy(std::span<const Label>(labels));
}

}  // namespace hsiband
