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

#include "jqpie/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace jqpie::metrics {

namespace {

void check_dims(const imagio::GrayscaleImage &a, const imagio::GrayscaleImage &b) {
  if (a.dims() != b.dims()) throw std::invalid_argument("image dims mismatch");
  if (a.empty()) throw std::invalid_argument("empty image");
}

double ssim_window(
    const imagio::GrayscaleImage &a, const imagio::GrayscaleImage &b,
    std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1,
    double k1, double k2) {
  const double n = double((r1 - r0) * (c1 - c0));
  double ma = 0, mb = 0;
  for (std::size_t r = r0; r < r1; ++r) {
    for (std::size_t c = c0; c < c1; ++c) {
      ma += a(r, c);
      mb += b(r, c);
    }
  }
  ma /= n;
  mb /= n;
  double va = 0, vb = 0, cov = 0;
  for (std::size_t r = r0; r < r1; ++r) {
    for (std::size_t c = c0; c < c1; ++c) {
      const double da = a(r, c) - ma;
      const double db = b(r, c) - mb;
      va += da * da;
      vb += db * db;
      cov += da * db;
    }
  }
  va /= n;
  vb /= n;
  cov /= n;
  return ((2 * ma * mb + k1) * (2 * cov + k2)) /
         ((ma * ma + mb * mb + k1) * (va + vb + k2));
}

}  // namespace

SsimMode parse_ssim_mode(std::string_view s) {
  if (s == "global") return SsimMode::global;
  if (s == "windowed") return SsimMode::windowed;
  throw std::invalid_argument("unknown SSIM mode: " + std::string(s));
}

double mse(const imagio::GrayscaleImage &a, const imagio::GrayscaleImage &b) {
  check_dims(a, b);
  double s = 0;
  const auto pa = a.pixels();
  const auto pb = b.pixels();
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const double d = pa[i] - pb[i];
    s += d * d;
  }
  return s / double(pa.size());
}

double psnr(const imagio::GrayscaleImage &a, const imagio::GrayscaleImage &b) {
  const double m = mse(a, b);
  if (m == 0) return kInfinitePsnr;
  const double l = a.max_value();
  return 10.0 * std::log10(l * l / m);
}

double ssim(
    const imagio::GrayscaleImage &a, const imagio::GrayscaleImage &b,
    SsimMode mode) {
  check_dims(a, b);
  const double l = a.max_value();
  const double k1 = (0.01 * l) * (0.01 * l);
  const double k2 = (0.03 * l) * (0.03 * l);
  if (mode == SsimMode::global) {
    return ssim_window(a, b, 0, a.height(), 0, a.width(), k1, k2);
  }
  double total = 0;
  std::size_t count = 0;
  for (std::size_t r = 0; r < a.height(); r += 8) {
    for (std::size_t c = 0; c < a.width(); c += 8) {
      total += ssim_window(
          a, b, r, std::min(r + 8, a.height()), c, std::min(c + 8, a.width()),
          k1, k2);
      ++count;
    }
  }
  return total / double(count);
}

QualityReport compare(
    const imagio::GrayscaleImage &reference,
    const imagio::GrayscaleImage &candidate,
    const imagio::GrayscaleImage &baseline, std::string baseline_id,
    SsimMode mode) {
  const auto ref = reference.clamped();
  const auto cand = candidate.clamped();
  const auto base = baseline.clamped();
  QualityReport q;
  q.psnr = psnr(ref, cand);
  q.ssim = ssim(ref, cand, mode);
  const double bp = psnr(ref, base);
  if (std::isinf(q.psnr) && std::isinf(bp)) {
    q.delta_psnr = 0;
  } else {
    q.delta_psnr = q.psnr - bp;
  }
  q.delta_ssim = q.ssim - ssim(ref, base, mode);
  q.baseline_id = std::move(baseline_id);
  return q;
}

void to_json(nlohmann::json &j, const QualityReport &q) {
  auto num = [](double v) -> nlohmann::json {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
  };
  j = {{"psnr", num(q.psnr)},
       {"ssim", q.ssim},
       {"delta_psnr", num(q.delta_psnr)},
       {"delta_ssim", q.delta_ssim},
       {"baseline_id", q.baseline_id}};
}

}  // namespace jqpie::metrics
