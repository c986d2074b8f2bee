#pragma once

/*
 * File formats.
 *
 *   Cube:   one ASCII header line "HSIC 1 <rows> <cols> <bands> <dtype>\n"
 *           (dtype u16 or f32) followed by exactly rows*cols*bands
 *           little-endian samples, band-major, row-major within a band.
 *   GT:     CSV of non-negative integers, one scene row per line.
 *   Maps:   plain PGM (P2) with maxval = class count, or GT-style CSV.
 *   Reports: CSV with a header row; reals carry 12 significant digits.
 */

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "hsiband/core.hpp"
#include "hsiband/error.hpp"
#include "hsiband/eval.hpp"
#include "hsiband/synthgen.hpp"

namespace hsiband {

inline constexpr std::string_view kCubeMagic = "HSIC";

inline std::string_view dtype_name(SampleType t) { return t == SampleType::u16 ? "u16" : "f32"; }

inline std::string format_real(double v) { return fmt::format("{:.12g}", v); }

namespace detail {

inline std::ifstream open_in(const std::string& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) fail(ErrorKind::io_error, "cannot open '" + path + "' for reading");
  return in;
}

inline std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) fail(ErrorKind::io_error, "cannot open '" + path + "' for writing");
  return out;
}

inline void finish(std::ostream& out, const std::string& what) {
  out.flush();
  if (!out) fail(ErrorKind::io_error, "failed writing " + what);
}

template <typename T>
bool parse_number(std::string_view token, T& value) {
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  return ec == std::errc() && ptr == end;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Cube

inline void write_cube(std::ostream& out, const BandCube& cube) {
  out << kCubeMagic << " 1 " << cube.rows() << ' ' << cube.cols() << ' ' << cube.n_bands() << ' '
      << dtype_name(cube.dtype()) << '\n';
  const auto values = cube.values();
  std::vector<unsigned char> bytes;
  if (cube.dtype() == SampleType::u16) {
    bytes.resize(values.size() * 2);
    for (std::size_t i = 0; i < values.size(); ++i) {
      const auto v = static_cast<std::uint16_t>(values[i]);
      bytes[2 * i] = static_cast<unsigned char>(v & 0xff);
      bytes[2 * i + 1] = static_cast<unsigned char>(v >> 8);
    }
  } else {
    bytes.resize(values.size() * 4);
    for (std::size_t i = 0; i < values.size(); ++i) {
      const auto v = std::bit_cast<std::uint32_t>(static_cast<float>(values[i]));
      for (int k = 0; k < 4; ++k) bytes[4 * i + k] = static_cast<unsigned char>(v >> (8 * k));
    }
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

inline BandCube read_cube(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) fail(ErrorKind::bad_magic, "missing cube header");
  std::istringstream fields(header);
  std::string magic, version, rows_s, cols_s, bands_s, dtype_s, extra;
  fields >> magic;
  if (magic != kCubeMagic) fail(ErrorKind::bad_magic, "cube header does not start with HSIC");
  if (!(fields >> version >> rows_s >> cols_s >> bands_s >> dtype_s) || (fields >> extra))
    fail(ErrorKind::parse_error, "malformed cube header '" + header + "'");
  if (version != "1") fail(ErrorKind::parse_error, "unsupported cube version " + version);
  std::size_t rows = 0, cols = 0, bands = 0;
  if (!detail::parse_number(rows_s, rows) || !detail::parse_number(cols_s, cols) ||
      !detail::parse_number(bands_s, bands) || rows == 0 || cols == 0 || bands == 0)
    fail(ErrorKind::parse_error, "cube header dimensions must be positive integers");

  SampleType dtype;
  std::size_t width;
  if (dtype_s == "u16") {
    dtype = SampleType::u16;
    width = 2;
  } else if (dtype_s == "f32") {
    dtype = SampleType::f32;
    width = 4;
  } else {
    fail(ErrorKind::unknown_dtype, "unknown cube dtype '" + dtype_s + "'");
  }

  const std::size_t count = rows * cols * bands;
  std::vector<unsigned char> bytes(count * width);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (static_cast<std::size_t>(in.gcount()) != bytes.size())
    fail(ErrorKind::truncated_payload,
         "cube payload holds " + std::to_string(in.gcount()) + " bytes, header requires " +
             std::to_string(bytes.size()));
  if (in.peek() != std::char_traits<char>::eof())
    fail(ErrorKind::parse_error, "cube payload is longer than the header declares");

  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (dtype == SampleType::u16) {
      values[i] = static_cast<std::uint16_t>(bytes[2 * i] | (bytes[2 * i + 1] << 8));
    } else {
      std::uint32_t v = 0;
      for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(bytes[4 * i + k]) << (8 * k);
      values[i] = std::bit_cast<float>(v);
    }
  }
  return BandCube(rows, cols, bands, std::move(values), dtype);
}

inline void save_cube(const BandCube& cube, const std::string& path) {
  auto out = detail::open_out(path, std::ios::out | std::ios::binary);
  write_cube(out, cube);
  detail::finish(out, path);
}

inline BandCube load_cube(const std::string& path) {
  auto in = detail::open_in(path, std::ios::in | std::ios::binary);
  return read_cube(in);
}

// ---------------------------------------------------------------------------
// Ground truth / class maps

inline GroundTruthMap read_gt(std::istream& in) {
  std::vector<Label> labels;
  std::size_t rows = 0, cols = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto content = detail::trim(line);
    if (content.empty()) continue;
    std::size_t n = 0;
    std::string_view rest = content;
    while (true) {
      const auto comma = rest.find(',');
      const auto token = detail::trim(rest.substr(0, comma));
      long long value = 0;
      if (!detail::parse_number(token, value))
        fail(ErrorKind::parse_error,
             "line " + std::to_string(line_no) + ": '" + std::string(token) + "' is not an integer");
      if (value < 0)
        fail(ErrorKind::negative_label, "line " + std::to_string(line_no) + ": negative label");
      if (value > 65535)
        fail(ErrorKind::label_out_of_range, "line " + std::to_string(line_no) + ": label too large");
      labels.push_back(static_cast<Label>(value));
      ++n;
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (rows == 0) cols = n;
    else if (n != cols)
      fail(ErrorKind::ragged_rows, "line " + std::to_string(line_no) + " has " +
                                       std::to_string(n) + " labels, expected " +
                                       std::to_string(cols));
    ++rows;
  }
  if (rows == 0) fail(ErrorKind::empty_input, "ground truth CSV is empty");
  return GroundTruthMap(rows, cols, std::move(labels));
}

inline void write_label_csv(std::ostream& out, const GroundTruthMap& map) {
  const auto labels = map.labels();
  for (std::size_t r = 0; r < map.rows(); ++r) {
    for (std::size_t c = 0; c < map.cols(); ++c) {
      if (c) out << ',';
      out << labels[r * map.cols() + c];
    }
    out << '\n';
  }
}

inline GroundTruthMap load_gt(const std::string& path) {
  auto in = detail::open_in(path);
  return read_gt(in);
}

inline void save_gt(const GroundTruthMap& gt, const std::string& path) {
  auto out = detail::open_out(path);
  write_label_csv(out, gt);
  detail::finish(out, path);
}

inline void write_pgm(std::ostream& out, const GroundTruthMap& map) {
  out << "P2\n" << map.cols() << ' ' << map.rows() << '\n' << std::max<std::size_t>(1, map.n_classes()) << '\n';
  const auto labels = map.labels();
  for (std::size_t r = 0; r < map.rows(); ++r) {
    for (std::size_t c = 0; c < map.cols(); ++c) {
      if (c) out << ' ';
      out << labels[r * map.cols() + c];
    }
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Reports. Band numbers are 1-based.

inline void write_mi_csv(std::ostream& out, std::span<const double> mi_per_band) {
  out << "band,mi_bits\n";
  for (std::size_t b = 0; b < mi_per_band.size(); ++b)
    out << (b + 1) << ',' << format_real(mi_per_band[b]) << '\n';
}

inline std::string_view scope_name(SuScope s) {
  return s == SuScope::all_pixels ? "all" : "labeled";
}

/// Per-band table: relevance rank is the position in S, admission rank the
/// position in the greedy admission order; both 1-based, empty when absent.
inline void write_selection_csv(std::ostream& out, const SelectionResult& sel) {
  const std::size_t n = sel.mi_per_band.size();
  std::vector<std::size_t> rel_rank(n, 0), adm_rank(n, 0);
  for (std::size_t i = 0; i < sel.relevant_ordered.size(); ++i) rel_rank[sel.relevant_ordered[i]] = i + 1;
  for (std::size_t i = 0; i < sel.admission_order.size(); ++i) adm_rank[sel.admission_order[i]] = i + 1;
  const auto rank = [](std::size_t r) { return r ? std::to_string(r) : std::string(); };

  out << "band,mi_bits,relevant,relevance_rank,selected,admission_rank\n";
  for (std::size_t b = 0; b < n; ++b)
    out << (b + 1) << ',' << format_real(sel.mi_per_band[b]) << ',' << (rel_rank[b] ? 1 : 0) << ','
        << rank(rel_rank[b]) << ',' << (adm_rank[b] ? 1 : 0) << ',' << rank(adm_rank[b]) << '\n';
}

inline std::string join_bands(std::span<const BandIndex> bands) {
  std::string s;
  for (std::size_t i = 0; i < bands.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(bands[i] + 1);
  }
  return s;
}

inline void write_selection_summary(std::ostream& out, const SelectionResult& sel) {
  out << "th_relevance=" << format_real(sel.config.th_relevance)
      << " th_redundancy=" << format_real(sel.config.th_redundancy) << " bins=" << sel.config.bins
      << " su_scope=" << scope_name(sel.config.su_scope) << '\n'
      << "relevant=" << sel.relevant_ordered.size() << " S=" << join_bands(sel.relevant_ordered) << '\n'
      << "selected=" << sel.selected.size() << " SS=" << join_bands(sel.selected) << '\n'
      << "admission_order=" << join_bands(sel.admission_order) << '\n';
}

inline void write_sweep_csv(std::ostream& out, std::span<const SweepCell> cells) {
  out << "th_relevance,th_redundancy,n_relevant,n_bands,accuracy\n";
  for (const auto& c : cells)
    out << format_real(c.th_relevance) << ',' << format_real(c.th_redundancy) << ','
        << c.n_relevant << ',' << c.n_bands << ','
        << (c.accuracy ? format_real(*c.accuracy) : std::string("NA")) << '\n';
}

inline void write_roles_csv(std::ostream& out, const SynthSpec& spec) {
  out << "band,role,seed,noise_sigma,duplicate_ratio\n";
  for (std::size_t b = 1; b <= SynthSpec::kBands; ++b)
    out << b << ',' << role_name(SynthSpec::role(b)) << ',' << spec.seed << ','
        << format_real(spec.noise_sigma) << ',' << format_real(spec.duplicate_ratio) << '\n';
}

}  // namespace hsiband
