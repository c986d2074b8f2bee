#pragma once

/*
 * Command-line front end.
 *
 * Exit codes: 0 success, 1 usage error, 2 data/validation/IO error,
 * 3 empty selection. Every failure writes one line starting with
 * "hsiband: error: <kind>:" (or "hsiband: empty-selection:") to the
 * diagnostic stream.
 */

#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hsiband/core.hpp"
#include "hsiband/error.hpp"
#include "hsiband/eval.hpp"
#include "hsiband/infotheory.hpp"
#include "hsiband/io.hpp"
#include "hsiband/selection.hpp"
#include "hsiband/synthgen.hpp"

namespace hsiband {

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_invalid = 2, exit_empty_selection = 3 };

namespace detail {

struct CliOptions {
  std::string cube;
  std::string gt;
  std::string out;
  std::size_t bins = 64;
  double th_relevance = 0.4;
  double th_redundancy = 0.7;
  std::string su_scope = "all";
  std::uint64_t seed = 1;
  std::string classifier = "centroid";
  std::size_t k = 1;
  unsigned workers = 1;
  std::vector<double> rel_grid{0.0, 0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6, 1.8, 2.0};
  std::vector<double> red_grid{0.3, 0.5, 0.7, 0.9, 1.0};
  std::vector<std::size_t> bands;  // 1-based
  double noise_sigma = 0.03;
  std::string gt_out;
  std::string roles_out;
};

inline SuScope parse_scope(const std::string& s) {
  return s == "labeled" ? SuScope::labeled_only : SuScope::all_pixels;
}

inline ClassifierKind parse_classifier(const CliOptions& o) {
  return o.classifier == "knn" ? ClassifierKind::knn(o.k) : ClassifierKind::centroid();
}

inline SelectionConfig selection_config(const CliOptions& o) {
  return SelectionConfig{o.th_relevance, o.th_redundancy, o.bins, parse_scope(o.su_scope)};
}

/// Writes to --out when given, otherwise to `fallback`.
inline void emit(const std::string& path, std::ostream& fallback,
                 const std::function<void(std::ostream&)>& body) {
  if (path.empty()) {
    body(fallback);
    return;
  }
  auto file = open_out(path, std::ios::out | std::ios::binary);
  body(file);
  finish(file, path);
}

inline std::vector<BandIndex> zero_based(const std::vector<std::size_t>& bands, std::size_t n_bands) {
  std::vector<BandIndex> out;
  for (std::size_t b : bands) {
    if (b == 0 || b > n_bands)
      fail(ErrorKind::invalid_argument, "band " + std::to_string(b) + " outside 1.." + std::to_string(n_bands));
    out.push_back(b - 1);
  }
  return out;
}

inline int report_empty(const SelectionResult& sel, std::ostream& err) {
  if (sel.status() == SelectionStatus::no_relevant_bands)
    err << "hsiband: empty-selection: no band reaches th_relevance="
        << format_real(sel.config.th_relevance) << "; lower --th-relevance\n";
  else
    err << "hsiband: empty-selection: no band admitted at th_redundancy="
        << format_real(sel.config.th_redundancy) << "; raise --th-redundancy\n";
  return exit_empty_selection;
}

}  // namespace detail

inline int cli_dispatch(int argc, const char* const* argv, std::ostream& out = std::cout,
                        std::ostream& err = std::cerr) {
  using detail::CliOptions;
  CliOptions o;
  CLI::App app{"Hyperspectral band selection by mutual information and symmetric uncertainty",
               "hsiband"};
  app.require_subcommand(1);

  const auto add_data = [&](CLI::App* cmd) {
    cmd->add_option("--cube", o.cube, "Cube file (HSIC format)")->required();
    cmd->add_option("--gt", o.gt, "Ground truth CSV")->required();
    cmd->add_option("--bins", o.bins, "Quantization levels")->capture_default_str()->check(CLI::Range(std::size_t{2}, std::size_t{1} << 16));
  };
  const auto add_selection = [&](CLI::App* cmd) {
    cmd->add_option("--th-relevance", o.th_relevance, "Minimum MI with ground truth (bits)")->capture_default_str();
    cmd->add_option("--th-redundancy", o.th_redundancy, "Redundancy threshold in (0, 1]")->capture_default_str();
    cmd->add_option("--su-scope", o.su_scope, "Pixels used for band-band statistics")
        ->capture_default_str()->check(CLI::IsMember({"all", "labeled"}));
    cmd->add_option("--workers", o.workers, "Threads for the SU matrix")->capture_default_str()->check(CLI::PositiveNumber);
  };
  const auto add_classifier = [&](CLI::App* cmd) {
    cmd->add_option("--seed", o.seed, "Split seed")->capture_default_str();
    cmd->add_option("--classifier", o.classifier, "centroid or knn")
        ->capture_default_str()->check(CLI::IsMember({"centroid", "knn"}));
    cmd->add_option("--k", o.k, "Neighbours for knn")->capture_default_str()->check(CLI::PositiveNumber);
  };

  auto* mi = app.add_subcommand("mi", "Per-band MI with the ground truth (CSV: band,mi_bits)");
  add_data(mi);
  mi->add_option("--out", o.out, "Output CSV (default stdout)");

  auto* select = app.add_subcommand("select", "Run relevance + redundancy selection");
  add_data(select);
  add_selection(select);
  select->add_option("--out", o.out, "Per-band selection report CSV (summary goes to stdout)");

  auto* sweep_cmd = app.add_subcommand("sweep", "Accuracy over a grid of threshold pairs");
  add_data(sweep_cmd);
  add_selection(sweep_cmd);
  add_classifier(sweep_cmd);
  sweep_cmd->add_option("--rel-grid", o.rel_grid, "Relevance thresholds")->delimiter(',');
  sweep_cmd->add_option("--red-grid", o.red_grid, "Redundancy thresholds")->delimiter(',');
  sweep_cmd->add_option("--out", o.out, "Output CSV (default stdout)");

  auto* synth = app.add_subcommand("synth", "Write the 19-band synthetic cube");
  synth->add_option("--gt", o.gt, "Ground truth CSV (default: generated field map)");
  synth->add_option("--gt-out", o.gt_out, "Where to write the ground truth used");
  synth->add_option("--seed", o.seed, "Generator seed")->capture_default_str();
  synth->add_option("--noise-sigma", o.noise_sigma, "Noise sigma as a fraction of the label range")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  synth->add_option("--roles-out", o.roles_out, "Band role table CSV");
  synth->add_option("--out", o.out, "Output cube")->required();

  auto* classify = app.add_subcommand("classify", "Accuracy for an explicit band list");
  add_data(classify);
  add_classifier(classify);
  classify->add_option("--bands", o.bands, "1-based band numbers")->delimiter(',')->required();
  classify->add_option("--out", o.out, "Output CSV (default stdout)");

  auto* reconstruct = app.add_subcommand("reconstruct", "Predict a class for every pixel");
  add_data(reconstruct);
  add_selection(reconstruct);
  add_classifier(reconstruct);
  reconstruct->add_option("--bands", o.bands, "1-based band numbers (default: run selection)")->delimiter(',');
  reconstruct->add_option("--out", o.out, "Output prefix; writes <out>.pgm and <out>.csv")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "hsiband: error: usage: " << e.what() << '\n';
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return exit_usage;
  }

  try {
    if (*mi) {
      const BandCube cube = load_cube(o.cube);
      const GroundTruthMap gt = load_gt(o.gt);
      validate_pair(cube, gt);
      std::vector<double> curve;
      const auto quantized = quantize_cube(cube, o.bins);
      for (const auto& q : quantized) curve.push_back(mi_with_labels(q, gt));
      detail::emit(o.out, out, [&](std::ostream& s) { write_mi_csv(s, curve); });
      return exit_ok;
    }

    if (*select) {
      const BandCube cube = load_cube(o.cube);
      const GroundTruthMap gt = load_gt(o.gt);
      const SelectionResult sel = select_bands(cube, gt, detail::selection_config(o), o.workers);
      if (!o.out.empty()) detail::emit(o.out, out, [&](std::ostream& s) { write_selection_csv(s, sel); });
      write_selection_summary(out, sel);
      if (sel.status() != SelectionStatus::ok) return detail::report_empty(sel, err);
      return exit_ok;
    }

    if (*sweep_cmd) {
      const BandCube cube = load_cube(o.cube);
      const GroundTruthMap gt = load_gt(o.gt);
      for (double red : o.red_grid)
        if (!(red > 0.0 && red <= 1.0))
          fail(ErrorKind::invalid_argument, "redundancy grid values must lie in (0, 1]");
      const auto cells = sweep(cube, gt, o.rel_grid, o.red_grid, o.seed, detail::parse_classifier(o),
                               o.bins, detail::parse_scope(o.su_scope), o.workers);
      detail::emit(o.out, out, [&](std::ostream& s) { write_sweep_csv(s, cells); });
      return exit_ok;
    }

    if (*synth) {
      const GroundTruthMap gt = o.gt.empty() ? make_field_map(FieldMapSpec{.seed = o.seed}) : load_gt(o.gt);
      SynthSpec spec;
      spec.seed = o.seed;
      spec.noise_sigma = o.noise_sigma;
      const BandCube cube = generate(gt, spec);
      save_cube(cube, o.out);
      if (!o.gt_out.empty()) save_gt(gt, o.gt_out);
      if (!o.roles_out.empty())
        detail::emit(o.roles_out, out, [&](std::ostream& s) { write_roles_csv(s, spec); });
      out << "wrote " << o.out << ": " << cube.rows() << "x" << cube.cols() << "x" << cube.n_bands()
          << " f32\n";
      write_roles_csv(out, spec);
      return exit_ok;
    }

    if (*classify) {
      const BandCube cube = load_cube(o.cube);
      const GroundTruthMap gt = load_gt(o.gt);
      validate_pair(cube, gt);
      const auto bands = detail::zero_based(o.bands, cube.n_bands());
      const double acc = train_classify(cube, gt, bands, split(gt, o.seed), detail::parse_classifier(o));
      detail::emit(o.out, out, [&](std::ostream& s) {
        s << "bands,n_bands,accuracy\n"
          << '"' << join_bands(bands) << "\"," << bands.size() << ',' << format_real(acc) << '\n';
      });
      return exit_ok;
    }

    if (*reconstruct) {
      const BandCube cube = load_cube(o.cube);
      const GroundTruthMap gt = load_gt(o.gt);
      validate_pair(cube, gt);
      std::vector<BandIndex> bands;
      if (!o.bands.empty()) {
        bands = detail::zero_based(o.bands, cube.n_bands());
      } else {
        const SelectionResult sel = select_bands(cube, gt, detail::selection_config(o), o.workers);
        if (sel.status() != SelectionStatus::ok) return detail::report_empty(sel, err);
        bands = sel.selected;
      }
      const SplitAssignment assignment = split(gt, o.seed);
      const GroundTruthMap map = reconstruct_map(cube, gt, bands, assignment, detail::parse_classifier(o));
      detail::emit(o.out + ".pgm", out, [&](std::ostream& s) { write_pgm(s, map); });
      detail::emit(o.out + ".csv", out, [&](std::ostream& s) { write_label_csv(s, map); });
      std::size_t correct = 0;
      for (PixelIndex p : assignment.test) correct += map.at(p) == gt.at(p) ? 1 : 0;
      out << "bands=" << join_bands(bands) << " test_accuracy="
          << format_real(static_cast<double>(correct) / static_cast<double>(assignment.test.size()))
          << '\n';
      return exit_ok;
    }
  } catch (const Error& e) {
    err << "hsiband: error: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return exit_invalid;
  }
  return exit_usage;
}

}  // namespace hsiband
