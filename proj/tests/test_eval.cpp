#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "fixtures.hpp"
#include "hsiband/eval.hpp"
#include "oracles.hpp"

using namespace hsiband;

namespace {

// Labels laid out as `counts[c - 1]` pixels of class c, then unlabeled fill.
GroundTruthMap map_with_counts(std::size_t rows, std::size_t cols, const std::vector<std::size_t>& counts) {
  std::vector<Label> labels(rows * cols, 0);
  std::size_t p = 0;
  for (std::size_t c = 0; c < counts.size(); ++c)
    for (std::size_t k = 0; k < counts[c]; ++k) labels[p++] = static_cast<Label>(c + 1);
  return GroundTruthMap(rows, cols, labels);
}

std::vector<double> label_band(const GroundTruthMap& gt) {
  return std::vector<double>(gt.labels().begin(), gt.labels().end());
}

}  // namespace

TEST(Split, PerClassFloorRule) {
  const auto gt = map_with_counts(4, 4, {4, 5, 1});
  const auto s = split(gt, 17);
  std::map<Label, std::size_t> train, test;
  for (PixelIndex p : s.train) ++train[gt.at(p)];
  for (PixelIndex p : s.test) ++test[gt.at(p)];
  EXPECT_EQ(train[1], 2u);
  EXPECT_EQ(test[1], 2u);
  EXPECT_EQ(train[2], 2u);
  EXPECT_EQ(test[2], 3u);
  EXPECT_EQ(train[3], 0u);
  EXPECT_EQ(test[3], 1u);
}

TEST(Split, PartitionsLabeledPixelsDeterministically) {
  const auto& gt = fixtures::field_map();
  const auto a = split(gt, 3);
  const auto b = split(gt, 3);
  const auto c = split(gt, 4);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
  EXPECT_NE(a.train, c.train);

  std::vector<PixelIndex> all(a.train);
  all.insert(all.end(), a.test.begin(), a.test.end());
  std::sort(all.begin(), all.end());
  EXPECT_EQ(all, gt.labeled_pixels());
  EXPECT_TRUE(std::adjacent_find(all.begin(), all.end()) == all.end());
}

TEST(Split, DegenerateGroundTruth) {
  GroundTruthMap gt(2, 2, {1, 1, 0, 0});
  EXPECT_THROW(split(gt, 1), Error);
}

TEST(TrainClassify, LabelBandIsPerfect) {
  const auto gt = map_with_counts(6, 6, {8, 10, 6, 7});
  const auto cube = fixtures::cube_from_bands(6, 6, {label_band(gt)});
  const std::vector<BandIndex> bands{0};
  EXPECT_EQ(train_classify(cube, gt, bands, split(gt, 1)), 1.0);
  EXPECT_EQ(train_classify(cube, gt, bands, split(gt, 1), ClassifierKind::knn(3)), 1.0);
}

TEST(TrainClassify, ConstantBandPredictsLowestClassId) {
  // Every centroid sits at the origin, so each prediction is the tie winner:
  // class 1. Accuracy is class 1's share of the test set.
  const auto gt = map_with_counts(6, 6, {6, 12, 8});
  const auto cube = fixtures::cube_from_bands(6, 6, {std::vector<double>(36, 42.0)});
  const auto s = split(gt, 9);
  std::size_t class1 = 0;
  for (PixelIndex p : s.test) class1 += gt.at(p) == 1;
  const std::vector<BandIndex> bands{0};
  EXPECT_DOUBLE_EQ(train_classify(cube, gt, bands, s),
                   static_cast<double>(class1) / s.test.size());
}

TEST(TrainClassify, ConstantBandWithMajorityClassOne) {
  const auto gt = map_with_counts(6, 6, {14, 6, 4});
  const auto cube = fixtures::cube_from_bands(6, 6, {std::vector<double>(36, 3.0)});
  const auto s = split(gt, 2);
  std::map<Label, std::size_t> test_counts;
  for (PixelIndex p : s.test) ++test_counts[gt.at(p)];
  std::size_t majority = 0;
  for (auto [l, n] : test_counts) majority = std::max(majority, n);
  const std::vector<BandIndex> bands{0};
  EXPECT_DOUBLE_EQ(train_classify(cube, gt, bands, s), static_cast<double>(majority) / s.test.size());
}

TEST(TrainClassify, Errors) {
  const auto gt = map_with_counts(4, 4, {4, 4});
  const auto cube = fixtures::cube_from_bands(4, 4, {label_band(gt)});
  const std::vector<BandIndex> none;
  EXPECT_THROW(train_classify(cube, gt, none, split(gt, 1)), Error);
  SplitAssignment empty_test = split(gt, 1);
  empty_test.test.clear();
  const std::vector<BandIndex> one{0};
  EXPECT_THROW(train_classify(cube, gt, one, empty_test), Error);
  EXPECT_THROW(ClassifierModel(cube, gt, one, split(gt, 1).train, ClassifierKind::knn(0)), Error);
}

TEST(ClassifierModel, ZScoresUseTrainStatisticsOnly) {
  const auto gt = map_with_counts(2, 4, {4, 4});
  const auto cube = fixtures::cube_from_bands(2, 4, {{1, 2, 3, 4, 100, 200, 300, 400}, std::vector<double>(8, 5)});
  const std::vector<PixelIndex> train{0, 1, 4};
  const std::vector<BandIndex> bands{0, 1};
  const ClassifierModel model(cube, gt, bands, train, ClassifierKind::centroid());
  EXPECT_DOUBLE_EQ(model.mean()[0], (1.0 + 2.0 + 100.0) / 3.0);
  EXPECT_DOUBLE_EQ(model.stddev()[1], 1.0);  // constant band guard
}

TEST(ClassifierModel, CentroidPointAndTieRule) {
  // Class 1 at feature -1, class 2 at +1 (after z-scoring); the midpoint is
  // equidistant and must go to class 1.
  const auto gt = map_with_counts(1, 4, {2, 2});
  const auto cube = fixtures::cube_from_bands(1, 4, {{0, 0, 2, 2}});
  const std::vector<PixelIndex> train{0, 1, 2, 3};
  const std::vector<BandIndex> bands{0};
  const ClassifierModel model(cube, gt, bands, train, ClassifierKind::centroid());
  EXPECT_EQ(model.predict(std::vector<double>{-1.0}), 1);
  EXPECT_EQ(model.predict(std::vector<double>{1.0}), 2);
  EXPECT_EQ(model.predict(std::vector<double>{0.0}), 1);

  const ClassifierModel knn(cube, gt, bands, train, ClassifierKind::knn(4));
  EXPECT_EQ(knn.predict(std::vector<double>{0.5}), 1);  // 2-2 vote tie
}

TEST(ClassifierModel, AgreesWithBruteForceScan) {
  std::mt19937 gen(8);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t rows = 10, cols = 10;
    std::vector<Label> labels(rows * cols);
    for (auto& l : labels) l = static_cast<Label>(gen() % 5);
    labels[0] = 1;
    labels[1] = 2;
    GroundTruthMap gt(rows, cols, labels);
    std::vector<std::vector<double>> bands(3, std::vector<double>(rows * cols));
    for (auto& b : bands)
      for (std::size_t p = 0; p < b.size(); ++p) b[p] = static_cast<float>(labels[p] + noise(gen));
    const auto cube = fixtures::cube_from_bands(rows, cols, bands);
    const auto s = split(gt, trial);
    const std::vector<BandIndex> use{0, 1, 2};
    const ClassifierModel model(cube, gt, use, s.train, ClassifierKind::centroid());
    for (PixelIndex p = 0; p < gt.pixels(); ++p) {
      const auto x = model.features(cube, p);
      const auto idx = oracle::nearest(model.points(), x);
      ASSERT_EQ(model.predict(x), model.classes()[idx]);
    }
  }
}

TEST(ReconstructMap, ShapeRangeAndNoZero) {
  const auto& gt = fixtures::field_map();
  const auto& cube = fixtures::default_synth_cube();
  const std::vector<BandIndex> bands{0, 15, 17};
  const auto map = reconstruct_map(cube, gt, bands, split(gt, 1));
  EXPECT_EQ(map.rows(), gt.rows());
  EXPECT_EQ(map.cols(), gt.cols());
  for (Label l : map.labels()) {
    EXPECT_GE(l, 1);
    EXPECT_LE(l, gt.n_classes());
  }
}

TEST(ReconstructMap, CentroidPixelGetsItsClass) {
  const auto gt = map_with_counts(2, 5, {4, 4});
  // pixels 8, 9 unlabeled; pixel 8 sits exactly on class 2's centroid
  const auto cube = fixtures::cube_from_bands(2, 5, {{1, 1, 1, 1, 5, 5, 5, 5, 5, 3}});
  SplitAssignment s;
  s.train = {0, 1, 2, 3, 4, 5, 6, 7};
  s.test = {};
  const std::vector<BandIndex> bands{0};
  const auto map = reconstruct_map(cube, gt, bands, s);
  EXPECT_EQ(map.at(8), 2);
  EXPECT_EQ(map.at(9), 1);  // equidistant: lowest class id
}

TEST(Sweep, GridShapeAndEmptyCells) {
  const auto& gt = fixtures::field_map();
  const auto& cube = fixtures::default_synth_cube();
  const std::vector<double> rel{0.0, 0.4, 3.0, 50.0};
  const std::vector<double> red{0.5, 0.7};
  const auto cells = sweep(cube, gt, rel, red, 1);
  ASSERT_EQ(cells.size(), 8u);
  EXPECT_EQ(cells[0].th_redundancy, 0.5);
  EXPECT_EQ(cells[1].th_relevance, 0.4);
  EXPECT_EQ(cells[4].th_redundancy, 0.7);
  for (const auto& c : cells) {
    EXPECT_EQ(c.accuracy.has_value(), c.n_bands > 0);
    if (c.accuracy) {
      EXPECT_GE(*c.accuracy, 0.0);
      EXPECT_LE(*c.accuracy, 1.0);
    }
  }
  EXPECT_EQ(cells[3].n_relevant, 0u);
  EXPECT_EQ(cells[3].n_bands, 0u);
  EXPECT_FALSE(cells[3].accuracy.has_value());
}

TEST(Sweep, RelevantCountNonIncreasingAlongRows) {
  const auto& gt = fixtures::field_map();
  const auto& cube = fixtures::default_synth_cube();
  std::vector<double> rel;
  for (int i = 0; i < 12; ++i) rel.push_back(0.25 * i);
  const std::vector<double> red{0.3, 0.7, 1.0};
  const auto cells = sweep(cube, gt, rel, red, 1);
  for (std::size_t r = 0; r < red.size(); ++r)
    for (std::size_t i = 1; i < rel.size(); ++i)
      EXPECT_LE(cells[r * rel.size() + i].n_relevant, cells[r * rel.size() + i - 1].n_relevant);
}

TEST(Sweep, MatchesIndependentSelections) {
  const auto& gt = fixtures::field_map();
  const auto& cube = fixtures::default_synth_cube();
  const std::vector<double> rel{0.4, 1.0};
  const std::vector<double> red{0.7};
  const auto cells = sweep(cube, gt, rel, red, 5);
  const auto s = split(gt, 5);
  for (std::size_t i = 0; i < rel.size(); ++i) {
    const auto sel = select_bands(cube, gt, SelectionConfig{rel[i], 0.7});
    EXPECT_EQ(cells[i].n_bands, sel.selected.size());
    EXPECT_EQ(*cells[i].accuracy, train_classify(cube, gt, sel.selected, s));
  }
}

TEST(Sweep, EmptyGridRejected) {
  const std::vector<double> none, some{0.5};
  EXPECT_THROW(sweep(fixtures::default_synth_cube(), fixtures::field_map(), none, some, 1), Error);
}
