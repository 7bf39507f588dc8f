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

// Independent oracles and fixtures shared by the test binaries. Nothing here
// calls into the library's transform or synthesis code.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "jqpie/image.hpp"

namespace testsupport {

using cplx = std::complex<double>;

inline jqpie::imagio::GrayscaleImage random_image(
    std::size_t h, std::size_t w, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> d(0, 255);
  std::vector<double> px(h * w);
  for (double &p : px) p = d(rng);
  return jqpie::imagio::GrayscaleImage(h, w, std::move(px));
}

/** Smooth image: low-frequency content plus mild noise. */
inline jqpie::imagio::GrayscaleImage smooth_image(
    std::size_t h, std::size_t w, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> n(-3.0, 3.0);
  jqpie::imagio::GrayscaleImage img(h, w);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const double v = 120 + 70 * std::sin(0.11 * double(r) + 0.3) +
                       40 * std::cos(0.07 * double(c)) + n(rng);
      img(r, c) = std::round(std::clamp(v, 0.0, 255.0));
    }
  }
  return img;
}

/** Direct evaluation of the orthonormal 2D DCT-II definition. */
inline std::array<double, 64> naive_dct2(const std::array<double, 64> &b) {
  std::array<double, 64> out{};
  const double pi = std::numbers::pi;
  for (int u = 0; u < 8; ++u) {
    for (int v = 0; v < 8; ++v) {
      const double au = u == 0 ? std::sqrt(1.0 / 8) : std::sqrt(2.0 / 8);
      const double av = v == 0 ? std::sqrt(1.0 / 8) : std::sqrt(2.0 / 8);
      double s = 0;
      for (int x = 0; x < 8; ++x) {
        for (int y = 0; y < 8; ++y) {
          s += b[std::size_t(8 * x + y)] * std::cos((2 * x + 1) * u * pi / 16) *
               std::cos((2 * y + 1) * v * pi / 16);
        }
      }
      out[std::size_t(8 * u + v)] = au * av * s;
    }
  }
  return out;
}

/** Zigzag order generated by walking anti-diagonals, alternating direction. */
inline std::array<int, 64> walked_zigzag() {
  std::array<int, 64> pi{};
  int k = 0;
  for (int s = 0; s <= 14; ++s) {
    if (s % 2 == 0) {
      for (int u = std::min(s, 7); u >= std::max(0, s - 7); --u) {
        pi[std::size_t(k++)] = 8 * u + (s - u);
      }
    } else {
      for (int u = std::max(0, s - 7); u <= std::min(s, 7); ++u) {
        pi[std::size_t(k++)] = 8 * u + (s - u);
      }
    }
  }
  return pi;
}

/** Dense complex matrix, row-major. */
struct Dense {
  std::size_t n = 0;
  std::vector<cplx> a;
  explicit Dense(std::size_t dim) : n(dim), a(dim * dim) {}
  cplx &operator()(std::size_t r, std::size_t c) { return a[r * n + c]; }
  cplx operator()(std::size_t r, std::size_t c) const { return a[r * n + c]; }
  static Dense identity(std::size_t dim) {
    Dense d(dim);
    for (std::size_t i = 0; i < dim; ++i) d(i, i) = 1;
    return d;
  }
};

inline Dense matmul(const Dense &x, const Dense &y) {
  Dense z(x.n);
  for (std::size_t i = 0; i < x.n; ++i) {
    for (std::size_t k = 0; k < x.n; ++k) {
      const cplx xik = x(i, k);
      if (xik == cplx(0)) continue;
      for (std::size_t j = 0; j < x.n; ++j) z(i, j) += xik * y(k, j);
    }
  }
  return z;
}

/** Embed a 2x2 single-qubit matrix on qubit q of an n-qubit space. */
inline Dense single_qubit(int n, int q, const std::array<cplx, 4> &m) {
  const std::size_t dim = std::size_t(1) << n;
  Dense d(dim);
  const std::size_t bit = std::size_t(1) << q;
  for (std::size_t c = 0; c < dim; ++c) {
    const std::size_t b = (c & bit) ? 1 : 0;
    for (std::size_t a = 0; a < 2; ++a) {
      const std::size_t r = a ? (c | bit) : (c & ~bit);
      d(r, c) += m[a * 2 + b];
    }
  }
  return d;
}

inline std::array<cplx, 4> ry_matrix(double t) {
  return {std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2)};
}

inline std::array<cplx, 4> rz_matrix(double t) {
  return {std::polar(1.0, -t / 2), 0, 0, std::polar(1.0, t / 2)};
}

inline Dense cx_matrix(int n, int control, int target) {
  const std::size_t dim = std::size_t(1) << n;
  Dense d(dim);
  for (std::size_t c = 0; c < dim; ++c) {
    const std::size_t r = (c >> control) & 1 ? c ^ (std::size_t(1) << target) : c;
    d(r, c) = 1;
  }
  return d;
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string &tag) {
    std::random_device rd;
    path = std::filesystem::temp_directory_path() /
           ("jqpie_" + tag + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
};

}  // namespace testsupport
