#pragma once

/*
 * Synthetic 19-band cube derived from a ground-truth map.
 *
 * Band roles (1-based):
 *   1 2 4 5 10 11 19   noisy copies of the labels
 *   3 6 8 12 14 15     labels with a seeded subset of classes zeroed, plus noise
 *   7 9 13             uniform noise independent of the labels
 *   16 18              disjoint pair: labels of a seeded class partition and of
 *                      its complement, zero elsewhere, no noise
 *   17                 near duplicate of band 4
 *
 * Each band draws from its own stream seeded with seed ^ band, so the cube is
 * a pure function of (gt, spec).
 */

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "hsiband/core.hpp"
#include "hsiband/error.hpp"
#include "hsiband/rng.hpp"

namespace hsiband {

enum class BandRole { noisy_copy, class_masked, near_duplicate, disjoint_pair_member, pure_noise };

inline std::string role_name(BandRole role) {
  switch (role) {
    case BandRole::noisy_copy: return "noisy_copy";
    case BandRole::class_masked: return "class_masked";
    case BandRole::near_duplicate: return "near_duplicate";
    case BandRole::disjoint_pair_member: return "disjoint_pair_member";
    case BandRole::pure_noise: return "pure_noise";
  }
  return "unknown";
}

struct SynthSpec {
  static constexpr std::size_t kBands = 19;

  std::uint64_t seed = 1;
  /// Gaussian noise sigma as a fraction of the label range [0, n_classes].
  double noise_sigma = 0.03;
  /// Near-duplicate perturbation sigma as a fraction of the noise sigma.
  double duplicate_ratio = 0.02;

  // 1-based band numbers.
  static constexpr std::size_t kDuplicateBand = 17;
  static constexpr std::size_t kDuplicateSource = 4;
  static constexpr std::size_t kDisjointFirst = 16;
  static constexpr std::size_t kDisjointSecond = 18;
  static constexpr std::array<std::size_t, 3> kNoiseBands{7, 9, 13};

  static BandRole role(std::size_t band_1based) {
    switch (band_1based) {
      case 7: case 9: case 13: return BandRole::pure_noise;
      case 16: case 18: return BandRole::disjoint_pair_member;
      case 17: return BandRole::near_duplicate;
      case 3: case 6: case 8: case 12: case 14: case 15: return BandRole::class_masked;
      default: return BandRole::noisy_copy;
    }
  }
};

namespace detail {

inline std::vector<Label> shuffled_classes(std::size_t n_classes, Rng& rng) {
  std::vector<Label> classes(n_classes);
  std::iota(classes.begin(), classes.end(), Label{1});
  rng.shuffle(classes.begin(), classes.end());
  return classes;
}

}  // namespace detail

inline BandCube generate(const GroundTruthMap& gt, const SynthSpec& spec) {
  gt.require_classifiable();
  if (!(spec.noise_sigma >= 0.0) || !(spec.duplicate_ratio >= 0.0))
    fail(ErrorKind::invalid_argument, "synthetic noise parameters must be >= 0");

  const std::size_t n_pix = gt.pixels();
  const std::size_t n_classes = gt.n_classes();
  const double label_range = static_cast<double>(n_classes);
  const double sigma = spec.noise_sigma * label_range;
  const auto labels = gt.labels();

  std::vector<double> values(SynthSpec::kBands * n_pix);
  const auto band_span = [&](std::size_t band_1based) {
    return std::span<double>(values).subspan((band_1based - 1) * n_pix, n_pix);
  };
  const auto stream = [&](std::size_t band_1based) { return Rng(spec.seed ^ band_1based); };

  // Disjoint pair: one seeded partition shared by both members.
  std::vector<bool> in_first(n_classes + 1, false);
  {
    Rng rng = stream(SynthSpec::kDisjointFirst);
    const auto classes = detail::shuffled_classes(n_classes, rng);
    for (std::size_t k = 0; k < classes.size() / 2; ++k) in_first[classes[k]] = true;
  }

  for (std::size_t band = 1; band <= SynthSpec::kBands; ++band) {
    if (band == SynthSpec::kDuplicateBand) continue;
    auto out = band_span(band);
    Rng rng = stream(band);
    switch (SynthSpec::role(band)) {
      case BandRole::noisy_copy:
        for (std::size_t p = 0; p < n_pix; ++p) out[p] = rng.normal(labels[p], sigma);
        break;
      case BandRole::class_masked: {
        const auto classes = detail::shuffled_classes(n_classes, rng);
        const std::size_t max_drop = std::min<std::size_t>(5, n_classes - 1);
        const std::size_t min_drop = std::min<std::size_t>(2, max_drop);
        const std::size_t n_drop = min_drop + rng.below(max_drop - min_drop + 1);
        std::vector<bool> dropped(n_classes + 1, false);
        for (std::size_t k = 0; k < n_drop; ++k) dropped[classes[k]] = true;
        for (std::size_t p = 0; p < n_pix; ++p)
          out[p] = rng.normal(dropped[labels[p]] ? 0.0 : labels[p], sigma);
        break;
      }
      case BandRole::pure_noise:
        for (std::size_t p = 0; p < n_pix; ++p) out[p] = rng.uniform(0.0, label_range);
        break;
      case BandRole::disjoint_pair_member: {
        const bool first = band == SynthSpec::kDisjointFirst;
        for (std::size_t p = 0; p < n_pix; ++p) {
          const Label l = labels[p];
          out[p] = (l != 0 && in_first[l] == first) ? l : 0.0;
        }
        break;
      }
      case BandRole::near_duplicate:
        break;
    }
    for (double& v : out) v = static_cast<float>(v);
  }

  {
    const auto source = band_span(SynthSpec::kDuplicateSource);
    auto out = band_span(SynthSpec::kDuplicateBand);
    Rng rng = stream(SynthSpec::kDuplicateBand);
    const double dup_sigma = spec.duplicate_ratio * sigma;
    for (std::size_t p = 0; p < n_pix; ++p)
      out[p] = static_cast<float>(rng.normal(source[p], dup_sigma));
  }

  return BandCube(gt.rows(), gt.cols(), SynthSpec::kBands, std::move(values), SampleType::f32);
}

/*
 * Field-style ground truth: non-overlapping rectangular parcels on an
 * unlabeled background, classes assigned round-robin so every class occurs.
 * Defaults mirror a 145 x 145 scene with 16 classes and ~49% labeled pixels.
 */
struct FieldMapSpec {
  std::size_t rows = 145;
  std::size_t cols = 145;
  std::size_t n_classes = 16;
  double labeled_fraction = 0.49;
  std::size_t min_side = 8;
  std::size_t max_side = 29;
  std::uint64_t seed = 1;
};

inline GroundTruthMap make_field_map(const FieldMapSpec& spec) {
  if (spec.rows == 0 || spec.cols == 0 || spec.n_classes < 2 || spec.min_side == 0 ||
      spec.min_side > spec.max_side || spec.max_side > std::min(spec.rows, spec.cols) ||
      !(spec.labeled_fraction > 0.0 && spec.labeled_fraction < 1.0))
    fail(ErrorKind::invalid_argument, "invalid field map parameters");

  std::vector<Label> labels(spec.rows * spec.cols, 0);
  const auto target = static_cast<std::size_t>(spec.labeled_fraction *
                                               static_cast<double>(labels.size()));
  Rng rng(spec.seed);
  std::size_t labeled = 0;
  std::size_t parcels = 0;
  const std::size_t span = spec.max_side - spec.min_side + 1;
  for (std::size_t attempt = 0; labeled < target && attempt < 200000; ++attempt) {
    const std::size_t h = spec.min_side + rng.below(span);
    const std::size_t w = spec.min_side + rng.below(span);
    const std::size_t r0 = rng.below(spec.rows - h + 1);
    const std::size_t c0 = rng.below(spec.cols - w + 1);
    bool free = true;
    for (std::size_t r = r0; r < r0 + h && free; ++r)
      for (std::size_t c = c0; c < c0 + w; ++c)
        if (labels[r * spec.cols + c] != 0) {
          free = false;
          break;
        }
    if (!free) continue;
    const auto cls = static_cast<Label>(parcels % spec.n_classes + 1);
    for (std::size_t r = r0; r < r0 + h; ++r)
      for (std::size_t c = c0; c < c0 + w; ++c) labels[r * spec.cols + c] = cls;
    labeled += h * w;
    ++parcels;
  }
  return GroundTruthMap(spec.rows, spec.cols, std::move(labels), spec.n_classes);
}

}  // namespace hsiband
