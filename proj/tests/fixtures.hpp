#pragma once

#include <cstdint>
#include <filesystem>
#include <unistd.h>
#include <string>
#include <vector>

#include "hsiband/hsiband.hpp"

namespace fixtures {

/// Default field map (145 x 145, 16 classes) and the synthetic cube built on it.
inline const hsiband::GroundTruthMap& field_map() {
  static const hsiband::GroundTruthMap gt = hsiband::make_field_map({});
  return gt;
}

inline hsiband::BandCube synth_cube(std::uint64_t seed) {
  hsiband::SynthSpec spec;
  spec.seed = seed;
  return hsiband::generate(field_map(), spec);
}

inline const hsiband::BandCube& default_synth_cube() {
  static const hsiband::BandCube cube = synth_cube(hsiband::SynthSpec{}.seed);
  return cube;
}

/// Build a cube from per-band value vectors of equal length.
inline hsiband::BandCube cube_from_bands(std::size_t rows, std::size_t cols,
                                         const std::vector<std::vector<double>>& bands) {
  std::vector<double> values;
  for (const auto& b : bands) values.insert(values.end(), b.begin(), b.end());
  return hsiband::BandCube(rows, cols, bands.size(), std::move(values));
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("hsiband_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace fixtures
