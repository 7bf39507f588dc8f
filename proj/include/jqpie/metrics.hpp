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

#include <limits>
#include <string>
#include <string_view>

#include "jqpie/image.hpp"
#include "json.hpp"

namespace jqpie::metrics {

/// Returned by psnr when the images are identical.
inline constexpr double kInfinitePsnr = std::numeric_limits<double>::infinity();

enum class SsimMode { global, windowed };
SsimMode parse_ssim_mode(std::string_view s);

double mse(const imagio::GrayscaleImage &a, const imagio::GrayscaleImage &b);

/// 10 log10(L^2 / MSE) with L from a's bit depth.
double psnr(const imagio::GrayscaleImage &a, const imagio::GrayscaleImage &b);

/// Population statistics; windowed mode averages 8x8 non-overlapping tiles
/// (edge tiles are truncated).
double ssim(
    const imagio::GrayscaleImage &a, const imagio::GrayscaleImage &b,
    SsimMode mode = SsimMode::global);

struct QualityReport {
  double psnr = 0;
  double ssim = 0;
  double delta_psnr = 0;
  double delta_ssim = 0;
  std::string baseline_id;
};

/// Scores candidate and baseline against reference. Inputs are clamped.
QualityReport compare(
    const imagio::GrayscaleImage &reference,
    const imagio::GrayscaleImage &candidate,
    const imagio::GrayscaleImage &baseline, std::string baseline_id,
    SsimMode mode = SsimMode::global);

/// Infinite values serialize as the string "inf".
void to_json(nlohmann::json &j, const QualityReport &q);

}  // namespace jqpie::metrics
