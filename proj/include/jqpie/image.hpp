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
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace jqpie::imagio {

/** Thrown for unreadable, unsupported or malformed image files. */
class ImageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Dims {
  std::size_t height = 0;
  std::size_t width = 0;
  friend bool operator==(const Dims &, const Dims &) = default;
};

/**
 * Real-valued grayscale plane, row-major.
 *
 * Images read from disk always hold intensities in [0, L]. Decoder outputs
 * may leave that range until clamped(); the class does not enforce it so
 * that pre-clamp reconstructions can be compared against oracles.
 */
class GrayscaleImage {
 public:
  GrayscaleImage() = default;
  GrayscaleImage(std::size_t height, std::size_t width, int bit_depth = 8);
  GrayscaleImage(
      std::size_t height, std::size_t width, std::vector<double> pixels,
      int bit_depth = 8);

  /** Build from nested rows; all rows must have equal length. */
  static GrayscaleImage from_rows(
      const std::vector<std::vector<double>> &rows, int bit_depth = 8);

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  Dims dims() const { return {height_, width_}; }
  Dims original_dims() const { return original_; }
  void set_original_dims(Dims d);
  int bit_depth() const { return bit_depth_; }
  double max_value() const { return double((1u << bit_depth_) - 1); }
  bool empty() const { return pixels_.empty(); }

  double operator()(std::size_t row, std::size_t col) const {
    return pixels_[row * width_ + col];
  }
  double &operator()(std::size_t row, std::size_t col) {
    return pixels_[row * width_ + col];
  }
  std::span<const double> pixels() const { return pixels_; }
  std::span<double> pixels() { return pixels_; }

  bool in_range() const;
  GrayscaleImage clamped() const;
  /** Top-left crop; the result's original dims equal its dims. */
  GrayscaleImage cropped(Dims d) const;
  /** Zero-pad on the bottom and right edges. Original dims are kept. */
  GrayscaleImage padded(Dims d) const;

  friend bool operator==(const GrayscaleImage &, const GrayscaleImage &) =
      default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  int bit_depth_ = 8;
  Dims original_{};
  std::vector<double> pixels_;
};

using Block = std::array<double, 64>;

/** 8x8 blocks of a zero-padded image, row-major over block indices. */
struct BlockGrid {
  std::size_t blocks_x = 0;  // block rows, ceil(H/8)
  std::size_t blocks_y = 0;  // block columns, ceil(W/8)
  std::vector<Block> blocks;
  Dims original_dims{};
  int bit_depth = 8;

  std::size_t size() const { return blocks.size(); }
  Dims padded_dims() const { return {blocks_x * 8, blocks_y * 8}; }
};

enum class Clamp { no, yes };

/**
 * Read a PGM (P2/P5) or PPM (P3/P6) file; PNG when built with libpng.
 * Colour inputs are reduced to BT.601 luminance. Maxval other than 255 is
 * rescaled to 8 bits.
 */
GrayscaleImage load_image(const std::filesystem::path &path);

/** Write a binary P5 PGM, maxval 255; pixels are clamped and rounded. */
void save_pgm(const GrayscaleImage &img, const std::filesystem::path &path);

/** ASCII P2 variant of save_pgm. */
void save_pgm_ascii(
    const GrayscaleImage &img, const std::filesystem::path &path);

/** True if the path has an extension load_image understands. */
bool is_supported_image(const std::filesystem::path &path);

BlockGrid pad_and_partition(const GrayscaleImage &img);

/**
 * Inverse of pad_and_partition: reassemble blocks, crop padding away, and
 * optionally clamp to [0, L].
 */
GrayscaleImage assemble_image(
    const BlockGrid &grid, Dims original_dims, Clamp clamp = Clamp::yes);

std::size_t next_power_of_two(std::size_t v);

/**
 * Zero-pad each dimension to a power of two no smaller than min_side. The
 * amplitude-encoded register layout needs power-of-two extents.
 */
GrayscaleImage pad_to_power_of_two(
    const GrayscaleImage &img, std::size_t min_side = 1);

}  // namespace jqpie::imagio
