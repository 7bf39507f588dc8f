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

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include "jqpie/image.hpp"

namespace jqpie::jpeg {

/** 8x8 coefficients in row-major frequency order, k = 8u + v. */
using CoefficientBlock = std::array<double, 64>;
/** Rounded quantized coefficients. Stored as double, always integral. */
using QuantizedBlock = std::array<double, 64>;
/** 64 coefficients in zigzag (scan) order. */
using ZigzagVector = std::array<double, 64>;
using Permutation = std::array<int, 64>;

/** Standard JPEG luminance table, row-major. */
inline constexpr std::array<int, 64> kLuminanceBase = {
    16, 11, 10, 16, 24,  40,  51,  61,   //
    12, 12, 14, 19, 26,  58,  60,  55,   //
    14, 13, 16, 24, 40,  57,  69,  56,   //
    14, 17, 22, 29, 51,  87,  80,  62,   //
    18, 22, 37, 56, 68,  109, 103, 77,   //
    24, 35, 55, 64, 81,  104, 113, 92,   //
    49, 64, 78, 87, 103, 121, 120, 101,  //
    72, 92, 95, 98, 112, 100, 103, 99};

/**
 * Quantization table Q(u,v) = S * base(u,v). Entries stay real valued for
 * any scale; they are not re-rounded.
 */
class QuantTable {
 public:
  explicit QuantTable(double scale = 1.0);
  QuantTable(const std::array<int, 64> &base, double scale);

  double scale() const { return scale_; }
  double operator[](int k) const { return entries_[std::size_t(k)]; }
  double at(int u, int v) const { return entries_[std::size_t(8 * u + v)]; }
  const std::array<double, 64> &entries() const { return entries_; }
  /** Largest entry; the block-encoding normalizer. */
  double lambda() const;

 private:
  double scale_;
  std::array<double, 64> entries_{};
};

/** Orthonormal 8-point DCT-II matrix, rows indexed by frequency. */
const std::array<double, 64> &dct_matrix();

CoefficientBlock dct2_block(const imagio::Block &block);
imagio::Block idct2_block(const CoefficientBlock &coeffs);

QuantizedBlock quantize_block(
    const CoefficientBlock &coeffs, const QuantTable &table);
CoefficientBlock dequantize_block(
    const QuantizedBlock &qblock, const QuantTable &table);

/**
 * Zigzag scan: pi[k] is the row-major frequency index visited at scan
 * position k.
 */
const Permutation &zigzag_permutation();
/** inverse[pi[k]] == k. */
const Permutation &inverse_zigzag_permutation();

ZigzagVector to_zigzag(const CoefficientBlock &coeffs);
CoefficientBlock from_zigzag(const ZigzagVector &zz);

/** Keep the first 2^r scan positions; r must lie in [2, 6]. */
ZigzagVector truncate_zigzag(const ZigzagVector &zz, int r);
void validate_truncation(int r);

enum class DecodeMode { jpeg, jqpie_oracle, qf_oracle };
DecodeMode parse_decode_mode(std::string_view s);

struct JpegOptions {
  double scale = 1.0;
  /** Subtract 128 before the forward DCT and add it back on decode. */
  bool level_shift = false;
};

/** Forward DCT of every block of a zero-padded image. */
std::vector<CoefficientBlock> forward_dct(
    const imagio::BlockGrid &grid, const JpegOptions &opts = {});

/**
 * Classical decoders. jpeg: DCT, quantize, dequantize, IDCT. jqpie_oracle:
 * additionally truncates the zigzag scan at r before dequantization.
 * qf_oracle: DCT, truncation, IDCT with no quantization. The result is not
 * clamped.
 */
imagio::GrayscaleImage classical_reference_decode(
    const imagio::GrayscaleImage &img, DecodeMode mode, int r,
    const JpegOptions &opts = {});

struct SparsityStats {
  std::size_t nonzero = 0;       // d
  std::size_t pixel_count = 0;   // N, padded to multiples of 8
  std::size_t block_count = 0;
  double compression_ratio = 0;  // N / d
  /** Fraction of blocks with a non-zero quantized coefficient at scan k. */
  std::array<double, 64> histogram{};
};

/** Throws std::domain_error when no coefficient survives quantization. */
SparsityStats sparsity_stats(
    const imagio::GrayscaleImage &img, const JpegOptions &opts = {});

}  // namespace jqpie::jpeg
