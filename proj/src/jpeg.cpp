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

#include "jqpie/jpeg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace jqpie::jpeg {

QuantTable::QuantTable(double scale) : QuantTable(kLuminanceBase, scale) {}

QuantTable::QuantTable(const std::array<int, 64> &base, double scale)
    : scale_(scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("quantization scale must be positive");
  }
  for (std::size_t k = 0; k < 64; ++k) {
    if (base[k] <= 0) throw std::invalid_argument("base entries must be > 0");
    entries_[k] = scale * base[k];
  }
}

double QuantTable::lambda() const {
  return *std::max_element(entries_.begin(), entries_.end());
}

const std::array<double, 64> &dct_matrix() {
  static const std::array<double, 64> m = [] {
    std::array<double, 64> out{};
    for (int u = 0; u < 8; ++u) {
      const double alpha = u == 0 ? std::sqrt(1.0 / 8) : std::sqrt(2.0 / 8);
      for (int x = 0; x < 8; ++x) {
        out[std::size_t(8 * u + x)] =
            alpha * std::cos((2 * x + 1) * u * std::numbers::pi / 16.0);
      }
    }
    return out;
  }();
  return m;
}

// Separable passes: C = M X M^T and X = M^T C M.
CoefficientBlock dct2_block(const imagio::Block &block) {
  const auto &m = dct_matrix();
  std::array<double, 64> tmp{};
  for (int u = 0; u < 8; ++u) {
    for (int y = 0; y < 8; ++y) {
      double acc = 0;
      for (int x = 0; x < 8; ++x) acc += m[8 * u + x] * block[8 * x + y];
      tmp[std::size_t(8 * u + y)] = acc;
    }
  }
  CoefficientBlock out{};
  for (int u = 0; u < 8; ++u) {
    for (int v = 0; v < 8; ++v) {
      double acc = 0;
      for (int y = 0; y < 8; ++y) acc += tmp[8 * u + y] * m[8 * v + y];
      out[std::size_t(8 * u + v)] = acc;
    }
  }
  return out;
}

imagio::Block idct2_block(const CoefficientBlock &coeffs) {
  const auto &m = dct_matrix();
  std::array<double, 64> tmp{};
  for (int x = 0; x < 8; ++x) {
    for (int v = 0; v < 8; ++v) {
      double acc = 0;
      for (int u = 0; u < 8; ++u) acc += m[8 * u + x] * coeffs[8 * u + v];
      tmp[std::size_t(8 * x + v)] = acc;
    }
  }
  imagio::Block out{};
  for (int x = 0; x < 8; ++x) {
    for (int y = 0; y < 8; ++y) {
      double acc = 0;
      for (int v = 0; v < 8; ++v) acc += tmp[8 * x + v] * m[8 * v + y];
      out[std::size_t(8 * x + y)] = acc;
    }
  }
  return out;
}

QuantizedBlock quantize_block(
    const CoefficientBlock &coeffs, const QuantTable &table) {
  QuantizedBlock out{};
  // std::round rounds half away from zero.
  for (int k = 0; k < 64; ++k) {
    out[std::size_t(k)] = std::round(coeffs[std::size_t(k)] / table[k]);
  }
  return out;
}

CoefficientBlock dequantize_block(
    const QuantizedBlock &qblock, const QuantTable &table) {
  CoefficientBlock out{};
  for (int k = 0; k < 64; ++k) {
    out[std::size_t(k)] = qblock[std::size_t(k)] * table[k];
  }
  return out;
}

const Permutation &zigzag_permutation() {
  static constexpr Permutation pi = {
      0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,
      12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,
      35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
      58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63};
  return pi;
}

const Permutation &inverse_zigzag_permutation() {
  static const Permutation inv = [] {
    Permutation out{};
    const auto &pi = zigzag_permutation();
    for (int k = 0; k < 64; ++k) out[std::size_t(pi[std::size_t(k)])] = k;
    return out;
  }();
  return inv;
}

ZigzagVector to_zigzag(const CoefficientBlock &coeffs) {
  const auto &pi = zigzag_permutation();
  ZigzagVector out{};
  for (std::size_t k = 0; k < 64; ++k) out[k] = coeffs[std::size_t(pi[k])];
  return out;
}

CoefficientBlock from_zigzag(const ZigzagVector &zz) {
  const auto &pi = zigzag_permutation();
  CoefficientBlock out{};
  for (std::size_t k = 0; k < 64; ++k) out[std::size_t(pi[k])] = zz[k];
  return out;
}

void validate_truncation(int r) {
  if (r < 2 || r > 6) {
    throw std::invalid_argument(
        "truncation level r must be in {2,...,6}, got " + std::to_string(r));
  }
}

ZigzagVector truncate_zigzag(const ZigzagVector &zz, int r) {
  validate_truncation(r);
  ZigzagVector out = zz;
  std::fill(out.begin() + (1 << r), out.end(), 0.0);
  return out;
}

DecodeMode parse_decode_mode(std::string_view s) {
  if (s == "jpeg") return DecodeMode::jpeg;
  if (s == "jqpie_oracle") return DecodeMode::jqpie_oracle;
  if (s == "qf_oracle") return DecodeMode::qf_oracle;
  throw std::invalid_argument("unknown decode mode: " + std::string(s));
}

std::vector<CoefficientBlock> forward_dct(
    const imagio::BlockGrid &grid, const JpegOptions &opts) {
  std::vector<CoefficientBlock> out;
  out.reserve(grid.size());
  for (imagio::Block b : grid.blocks) {
    if (opts.level_shift) {
      for (double &v : b) v -= 128.0;
    }
    out.push_back(dct2_block(b));
  }
  return out;
}

imagio::GrayscaleImage classical_reference_decode(
    const imagio::GrayscaleImage &img, DecodeMode mode, int r,
    const JpegOptions &opts) {
  validate_truncation(r);
  const QuantTable table(opts.scale);
  imagio::BlockGrid grid = imagio::pad_and_partition(img);
  const auto coeffs = forward_dct(grid, opts);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    CoefficientBlock c = coeffs[j];
    switch (mode) {
      case DecodeMode::jpeg:
        c = dequantize_block(quantize_block(c, table), table);
        break;
      case DecodeMode::jqpie_oracle:
        c = dequantize_block(
            from_zigzag(truncate_zigzag(to_zigzag(quantize_block(c, table)), r)),
            table);
        break;
      case DecodeMode::qf_oracle:
        c = from_zigzag(truncate_zigzag(to_zigzag(c), r));
        break;
    }
    grid.blocks[j] = idct2_block(c);
    if (opts.level_shift) {
      for (double &v : grid.blocks[j]) v += 128.0;
    }
  }
  return imagio::assemble_image(grid, img.dims(), imagio::Clamp::no);
}

SparsityStats sparsity_stats(
    const imagio::GrayscaleImage &img, const JpegOptions &opts) {
  const QuantTable table(opts.scale);
  const imagio::BlockGrid grid = imagio::pad_and_partition(img);
  SparsityStats st;
  st.block_count = grid.size();
  st.pixel_count = grid.size() * 64;
  std::array<std::size_t, 64> counts{};
  for (const auto &c : forward_dct(grid, opts)) {
    const ZigzagVector zz = to_zigzag(quantize_block(c, table));
    for (std::size_t k = 0; k < 64; ++k) {
      if (zz[k] != 0.0) {
        ++counts[k];
        ++st.nonzero;
      }
    }
  }
  if (st.nonzero == 0) {
    throw std::domain_error(
        "compression ratio undefined: no non-zero quantized coefficients");
  }
  st.compression_ratio = double(st.pixel_count) / double(st.nonzero);
  for (std::size_t k = 0; k < 64; ++k) {
    st.histogram[k] = double(counts[k]) / double(st.block_count);
  }
  return st;
}

}  // namespace jqpie::jpeg
