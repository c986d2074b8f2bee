#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hsiband/core.hpp"
#include "hsiband/error.hpp"
#include "hsiband/rng.hpp"
#include "hsiband/selection.hpp"

namespace hsiband {

/// Stratified 50/50 split: per class, floor(count / 2) seeded picks go to train.
inline SplitAssignment split(const GroundTruthMap& gt, std::uint64_t seed) {
  gt.require_classifiable();
  std::vector<std::vector<PixelIndex>> by_class(gt.n_classes() + 1);
  for (PixelIndex p = 0; p < gt.pixels(); ++p)
    if (gt.at(p) != 0) by_class[gt.at(p)].push_back(p);

  SplitAssignment out;
  out.seed = seed;
  Rng rng(seed);
  for (std::size_t c = 1; c < by_class.size(); ++c) {
    auto& pixels = by_class[c];
    rng.shuffle(pixels.begin(), pixels.end());
    const std::size_t n_train = pixels.size() / 2;
    out.train.insert(out.train.end(), pixels.begin(), pixels.begin() + n_train);
    out.test.insert(out.test.end(), pixels.begin() + n_train, pixels.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

struct ClassifierKind {
  enum class Type { nearest_centroid, knn } type = Type::nearest_centroid;
  std::size_t k = 1;

  static ClassifierKind centroid() { return {}; }
  static ClassifierKind knn(std::size_t k) { return {Type::knn, k}; }
};

/*
 * ClassifierModel
 *
 * Features are the chosen bands, z-scored with train-pixel statistics (a zero
 * stddev is replaced by 1). Distances are squared Euclidean; every tie goes to
 * the lowest class id.
 */
class ClassifierModel {
 public:
  ClassifierModel(const BandCube& cube, const GroundTruthMap& gt,
                  std::span<const BandIndex> bands, std::span<const PixelIndex> train,
                  ClassifierKind kind)
      : kind_(kind), bands_(bands.begin(), bands.end()) {
    if (bands_.empty()) fail(ErrorKind::invalid_argument, "classifier needs at least one band");
    if (train.empty()) fail(ErrorKind::empty_input, "classifier needs training pixels");
    if (kind_.type == ClassifierKind::Type::knn && kind_.k == 0)
      fail(ErrorKind::invalid_argument, "k-NN needs k >= 1");
    for (BandIndex b : bands_)
      if (b >= cube.n_bands()) fail(ErrorKind::invalid_argument, "band index out of range");

    const std::size_t dim = bands_.size();
    mean_.assign(dim, 0.0);
    stddev_.assign(dim, 0.0);
    const double n = static_cast<double>(train.size());
    for (std::size_t f = 0; f < dim; ++f) {
      double sum = 0.0;
      for (PixelIndex p : train) sum += cube.at(bands_[f], p);
      mean_[f] = sum / n;
      double ss = 0.0;
      for (PixelIndex p : train) {
        const double d = cube.at(bands_[f], p) - mean_[f];
        ss += d * d;
      }
      const double sd = std::sqrt(ss / n);
      stddev_[f] = sd > 0.0 ? sd : 1.0;
    }

    if (kind_.type == ClassifierKind::Type::nearest_centroid) {
      std::vector<std::vector<double>> sums(gt.n_classes() + 1, std::vector<double>(dim, 0.0));
      std::vector<std::size_t> counts(gt.n_classes() + 1, 0);
      for (PixelIndex p : train) {
        const Label l = gt.at(p);
        if (l == 0) fail(ErrorKind::invalid_argument, "training pixel is unlabeled");
        const auto x = features(cube, p);
        for (std::size_t f = 0; f < dim; ++f) sums[l][f] += x[f];
        ++counts[l];
      }
      for (std::size_t c = 1; c < sums.size(); ++c) {
        if (counts[c] == 0) continue;
        for (double& v : sums[c]) v /= static_cast<double>(counts[c]);
        classes_.push_back(static_cast<Label>(c));
        points_.push_back(std::move(sums[c]));
      }
    } else {
      for (PixelIndex p : train) {
        const Label l = gt.at(p);
        if (l == 0) fail(ErrorKind::invalid_argument, "training pixel is unlabeled");
        classes_.push_back(l);
        points_.push_back(features(cube, p));
      }
    }
  }

  std::vector<double> features(const BandCube& cube, PixelIndex p) const {
    std::vector<double> x(bands_.size());
    for (std::size_t f = 0; f < bands_.size(); ++f)
      x[f] = (cube.at(bands_[f], p) - mean_[f]) / stddev_[f];
    return x;
  }

  Label predict(std::span<const double> x) const {
    if (kind_.type == ClassifierKind::Type::nearest_centroid) {
      Label best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < points_.size(); ++i) {
        const double d = distance(x, points_[i]);
        // classes_ is ascending, so strict < keeps the lowest id on ties
        if (d < best_d) {
          best_d = d;
          best = classes_[i];
        }
      }
      return best;
    }

    std::vector<std::pair<double, Label>> nearest;
    nearest.reserve(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i)
      nearest.emplace_back(distance(x, points_[i]), classes_[i]);
    const std::size_t k = std::min(kind_.k, nearest.size());
    std::partial_sort(nearest.begin(), nearest.begin() + static_cast<std::ptrdiff_t>(k),
                      nearest.end());
    std::vector<std::size_t> votes;
    for (std::size_t i = 0; i < k; ++i) {
      if (votes.size() <= nearest[i].second) votes.resize(nearest[i].second + 1, 0);
      ++votes[nearest[i].second];
    }
    Label best = 0;
    for (std::size_t c = 1; c < votes.size(); ++c)
      if (votes[c] > votes[best]) best = static_cast<Label>(c);
    return best;
  }

  Label predict(const BandCube& cube, PixelIndex p) const { return predict(features(cube, p)); }

  std::span<const double> mean() const noexcept { return mean_; }
  std::span<const double> stddev() const noexcept { return stddev_; }
  std::span<const Label> classes() const noexcept { return classes_; }
  const std::vector<std::vector<double>>& points() const noexcept { return points_; }

 private:
  static double distance(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t f = 0; f < a.size(); ++f) {
      const double diff = a[f] - b[f];
      d += diff * diff;
    }
    return d;
  }

  ClassifierKind kind_;
  std::vector<BandIndex> bands_;
  std::vector<double> mean_;
  std::vector<double> stddev_;
  std::vector<Label> classes_;               // ascending for centroids
  std::vector<std::vector<double>> points_;  // centroids or training vectors
};

inline double train_classify(const BandCube& cube, const GroundTruthMap& gt,
                             std::span<const BandIndex> bands, const SplitAssignment& assignment,
                             ClassifierKind kind = ClassifierKind::centroid()) {
  validate_pair(cube, gt);
  if (bands.empty()) fail(ErrorKind::invalid_argument, "band set is empty");
  if (assignment.test.empty()) fail(ErrorKind::empty_input, "test set is empty");
  const ClassifierModel model(cube, gt, bands, assignment.train, kind);
  std::size_t correct = 0;
  for (PixelIndex p : assignment.test)
    if (model.predict(cube, p) == gt.at(p)) ++correct;
  return static_cast<double>(correct) / static_cast<double>(assignment.test.size());
}

/// Predicted class for every pixel of the scene, labeled or not.
inline GroundTruthMap reconstruct_map(const BandCube& cube, const GroundTruthMap& gt,
                                      std::span<const BandIndex> bands,
                                      const SplitAssignment& assignment,
                                      ClassifierKind kind = ClassifierKind::centroid()) {
  validate_pair(cube, gt);
  const ClassifierModel model(cube, gt, bands, assignment.train, kind);
  std::vector<Label> out(gt.pixels());
  for (PixelIndex p = 0; p < gt.pixels(); ++p) out[p] = model.predict(cube, p);
  return GroundTruthMap(gt.rows(), gt.cols(), std::move(out), gt.n_classes());
}

struct SweepCell {
  double th_relevance = 0.0;
  double th_redundancy = 0.0;
  std::size_t n_relevant = 0;  // |S|
  std::size_t n_bands = 0;     // |SS|
  std::optional<double> accuracy;  // absent when SS is empty
};

/*
 * Threshold grid, one cell per (th_redundancy, th_relevance) pair in row-major
 * order with th_redundancy as the row. Band statistics and the split are
 * shared by every cell, so cells differ only by the selection.
 */
inline std::vector<SweepCell> sweep(const BandCube& cube, const GroundTruthMap& gt,
                                    std::span<const double> rel_grid,
                                    std::span<const double> red_grid, std::uint64_t seed,
                                    ClassifierKind kind = ClassifierKind::centroid(),
                                    std::size_t bins = 64, SuScope scope = SuScope::all_pixels,
                                    unsigned workers = 1) {
  if (rel_grid.empty() || red_grid.empty())
    fail(ErrorKind::invalid_argument, "sweep grids must be non-empty");
  BandStatistics stats(cube, gt, bins, scope);
  const SplitAssignment assignment = split(gt, seed);

  std::vector<SweepCell> cells;
  cells.reserve(rel_grid.size() * red_grid.size());
  for (double red : red_grid) {
    for (double rel : rel_grid) {
      SelectionConfig config{rel, red, bins, scope};
      const SelectionResult sel = select_bands(stats, config, workers);
      SweepCell cell{rel, red, sel.relevant_ordered.size(), sel.selected.size(), std::nullopt};
      if (!sel.selected.empty())
        cell.accuracy = train_classify(cube, gt, sel.selected, assignment, kind);
      cells.push_back(cell);
    }
  }
  return cells;
}

}  // namespace hsiband
