// Copyright 2026 The jqpie Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "jqpie/image.hpp"
#include "jqpie/jpeg.hpp"
#include "jqpie/metrics.hpp"
#include "jqpie/pipeline.hpp"
#include "jqpie/statevector.hpp"
#include "jqpie/synth.hpp"

namespace jqpie::bench {

namespace fs = std::filesystem;

struct LabeledImage {
  std::string label;     // path relative to the dataset root
  std::string category;  // first sub-directory, or "default"
  imagio::GrayscaleImage image;
};

struct Dataset {
  std::vector<LabeledImage> images;
  std::size_t skipped = 0;
  std::vector<std::string> warnings;
};

/**
 * Recursively collect images from directories and explicit files, ordered
 * lexicographically by label. Unsupported or unreadable files are skipped
 * with a warning. Throws std::runtime_error for a missing path or when no
 * image is found.
 */
Dataset ingest_dataset(const std::vector<fs::path> &inputs);
Dataset ingest_dataset(const fs::path &input);

struct SweepConfig {
  std::vector<fs::path> inputs;
  std::vector<synth::Method> methods = {
      synth::Method::jqpie, synth::Method::qf_jqpie};
  std::vector<int> r_set = {5, 4, 3, 2};
  double scale = 1.0;
  pipeline::NormMode norm_mode = pipeline::NormMode::global;
  sim::Backend backend = sim::Backend::operator_level;
  metrics::SsimMode ssim_mode = metrics::SsimMode::global;
  bool level_shift = false;
  /// 0 picks the hardware concurrency.
  unsigned threads = 0;

  /// Throws std::invalid_argument on an empty r_set/method list or S <= 0.
  void validate() const;
};

inline constexpr double kPsnrTolerance = -0.5;
inline constexpr double kSsimTolerance = -0.01;

struct SweepRow {
  std::string image;
  std::string category;
  synth::Method method = synth::Method::jqpie;
  int r = 6;
  double scale = 1.0;
  double psnr = 0;
  double ssim = 0;
  double delta_psnr = 0;
  double delta_ssim = 0;
  double success_prob = 0;
  std::int64_t cx_total = 0;
  std::int64_t depth_total = 0;
  /// State-prep CX saved relative to loading every coefficient (r = 6).
  double cx_reduction_pct = 0;
  bool within_tolerance = false;
  /// Set on error rows; numeric fields are then meaningless.
  std::optional<std::string> error;
};

struct ImageStats {
  std::string image;
  std::string category;
  std::optional<jpeg::SparsityStats> stats;
  std::optional<std::string> error;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<ImageStats> stats;
  std::size_t skipped = 0;
  std::size_t error_rows() const;
};

/** 100 * (1 - cx(state prep at r) / cx(state prep at r = 6)). */
double state_prep_cx_reduction(int h, int w, int r);

/** Rows for one image in method-major, r-minor order. */
std::vector<SweepRow> evaluate_image(
    const LabeledImage &img, const SweepConfig &cfg);

SweepResult run_sweep(const SweepConfig &cfg);
SweepResult run_sweep(const Dataset &data, const SweepConfig &cfg);

/** Fixed header and 6-decimal formatting; identical rows give identical bytes. */
std::string to_csv(const std::vector<SweepRow> &rows);

nlohmann::json summary_json(const SweepResult &res);

/** Pooled scan-position histogram: 64 lines of "position,fraction". */
std::string histogram_csv(const std::vector<ImageStats> &stats);

struct ReportFiles {
  fs::path csv;
  fs::path summary;
  fs::path histogram;
};

/**
 * Write sweep.csv, summary.json and histogram.csv under out_dir. Throws
 * std::invalid_argument for empty rows and std::runtime_error when a file
 * cannot be written.
 */
ReportFiles emit_report(const SweepResult &res, const fs::path &out_dir);

}  // namespace jqpie::bench
