#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hsiband/error.hpp"

namespace hsiband {

using Label = std::uint16_t;
using BandIndex = std::size_t;
/// Linear pixel index, row * cols + col.
using PixelIndex = std::size_t;

/// On-disk sample type of a cube. Values are always held as doubles in memory.
enum class SampleType { u16, f32 };

/*
 * BandCube
 *
 * rows x cols x n_bands reflectance measures, band-major and row-major within
 * a band. Immutable once built; construction rejects any broken invariant.
 */
class BandCube {
 public:
  BandCube(std::size_t rows, std::size_t cols, std::size_t n_bands,
           std::vector<double> values, SampleType dtype = SampleType::f32)
      : rows_(rows), cols_(cols), n_bands_(n_bands), dtype_(dtype),
        values_(std::move(values)) {
    if (rows_ == 0 || cols_ == 0 || n_bands_ == 0)
      fail(ErrorKind::invalid_argument, "cube dimensions must be positive");
    if (values_.size() != rows_ * cols_ * n_bands_)
      fail(ErrorKind::length_mismatch,
           "cube holds " + std::to_string(values_.size()) + " values, expected " +
               std::to_string(rows_ * cols_ * n_bands_));
    for (double v : values_) {
      if (!std::isfinite(v)) fail(ErrorKind::non_finite, "cube contains a non-finite value");
      if (dtype_ == SampleType::u16 &&
          (v < 0.0 || v > 65535.0 || v != std::floor(v)))
        fail(ErrorKind::invalid_argument, "u16 cube value is not an integer in [0, 65535]");
      if (dtype_ == SampleType::f32 && static_cast<double>(static_cast<float>(v)) != v)
        fail(ErrorKind::invalid_argument, "f32 cube value is not representable as float");
    }
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t n_bands() const noexcept { return n_bands_; }
  std::size_t pixels() const noexcept { return rows_ * cols_; }
  SampleType dtype() const noexcept { return dtype_; }
  std::span<const double> values() const noexcept { return values_; }

  std::span<const double> band(BandIndex b) const {
    if (b >= n_bands_)
      fail(ErrorKind::invalid_argument, "band index " + std::to_string(b) + " out of range");
    return std::span<const double>(values_).subspan(b * pixels(), pixels());
  }

  double at(BandIndex b, PixelIndex p) const { return values_[b * pixels() + p]; }

  friend bool operator==(const BandCube&, const BandCube&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::size_t n_bands_;
  SampleType dtype_;
  std::vector<double> values_;
};

/*
 * GroundTruthMap
 *
 * Per-pixel class labels; 0 marks an unlabeled pixel, 1..n_classes are
 * classes. When n_classes is not given it is inferred as the maximum label.
 */
class GroundTruthMap {
 public:
  GroundTruthMap(std::size_t rows, std::size_t cols, std::vector<Label> labels)
      : GroundTruthMap(rows, cols, labels,
                       labels.empty() ? Label{0}
                                      : *std::max_element(labels.begin(), labels.end())) {}

  GroundTruthMap(std::size_t rows, std::size_t cols, std::vector<Label> labels,
                 std::size_t n_classes)
      : rows_(rows), cols_(cols), n_classes_(n_classes), labels_(std::move(labels)) {
    if (rows_ == 0 || cols_ == 0)
      fail(ErrorKind::invalid_argument, "ground truth dimensions must be positive");
    if (labels_.size() != rows_ * cols_)
      fail(ErrorKind::length_mismatch, "ground truth label count does not match rows x cols");
    for (Label l : labels_)
      if (l > n_classes_)
        fail(ErrorKind::label_out_of_range,
             "label " + std::to_string(l) + " exceeds class count " + std::to_string(n_classes_));
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t pixels() const noexcept { return rows_ * cols_; }
  std::size_t n_classes() const noexcept { return n_classes_; }
  std::span<const Label> labels() const noexcept { return labels_; }
  Label at(PixelIndex p) const { return labels_[p]; }

  std::vector<PixelIndex> labeled_pixels() const {
    std::vector<PixelIndex> out;
    for (PixelIndex p = 0; p < labels_.size(); ++p)
      if (labels_[p] != 0) out.push_back(p);
    return out;
  }

  std::size_t distinct_classes() const {
    std::vector<bool> seen(n_classes_ + 1, false);
    std::size_t n = 0;
    for (Label l : labels_)
      if (l != 0 && !seen[l]) {
        seen[l] = true;
        ++n;
      }
    return n;
  }

  /// Classification needs at least two distinct nonzero labels.
  void require_classifiable() const {
    if (distinct_classes() < 2)
      fail(ErrorKind::degenerate_gt, "ground truth needs at least two distinct nonzero labels");
  }

  friend bool operator==(const GroundTruthMap&, const GroundTruthMap&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::size_t n_classes_;
  std::vector<Label> labels_;
};

inline void validate_pair(const BandCube& cube, const GroundTruthMap& gt) {
  if (cube.rows() != gt.rows() || cube.cols() != gt.cols())
    fail(ErrorKind::dimension_mismatch,
         "cube is " + std::to_string(cube.rows()) + "x" + std::to_string(cube.cols()) +
             " but ground truth is " + std::to_string(gt.rows()) + "x" +
             std::to_string(gt.cols()));
  gt.require_classifiable();
}

/// Which pixels feed band-to-band statistics.
enum class SuScope { all_pixels, labeled_only };

struct SelectionConfig {
  double th_relevance = 0.4;
  double th_redundancy = 0.7;
  std::size_t bins = 64;
  SuScope su_scope = SuScope::all_pixels;

  void validate() const {
    if (!(th_relevance >= 0.0) || !std::isfinite(th_relevance))
      fail(ErrorKind::invalid_argument, "th_relevance must be a finite value >= 0");
    if (!(th_redundancy > 0.0 && th_redundancy <= 1.0))
      fail(ErrorKind::invalid_argument, "th_redundancy must lie in (0, 1]");
    if (bins < 2) fail(ErrorKind::invalid_argument, "bins must be >= 2");
  }

  friend bool operator==(const SelectionConfig&, const SelectionConfig&) = default;
};

enum class SelectionStatus {
  ok,
  no_relevant_bands,  // S is empty
  empty_selection,    // S is non-empty but no band was admitted
};

struct SelectionResult {
  std::vector<double> mi_per_band;
  /// S: relevant bands in ascending MI order (ties by band index).
  std::vector<BandIndex> relevant_ordered;
  /// SS: admitted bands, ascending band index.
  std::vector<BandIndex> selected;
  /// SS in the order the greedy loop admitted them.
  std::vector<BandIndex> admission_order;
  SelectionConfig config;

  SelectionStatus status() const noexcept {
    if (relevant_ordered.empty()) return SelectionStatus::no_relevant_bands;
    if (selected.empty()) return SelectionStatus::empty_selection;
    return SelectionStatus::ok;
  }
};

struct SplitAssignment {
  std::uint64_t seed = 0;
  std::vector<PixelIndex> train;  // ascending
  std::vector<PixelIndex> test;   // ascending
};

}  // namespace hsiband
