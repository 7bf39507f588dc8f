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

#include <cmath>
#include <random>

#include "doctest.h"
#include "jqpie/jpeg.hpp"
#include "support.hpp"

using namespace jqpie;
using namespace jqpie::jpeg;

namespace {

imagio::Block random_block(std::mt19937 &rng, double lo = 0, double hi = 255) {
  std::uniform_real_distribution<double> d(lo, hi);
  imagio::Block b{};
  for (double &v : b) v = d(rng);
  return b;
}

}  // namespace

TEST_CASE("quant table") {
  const QuantTable t(1.0);
  CHECK(t.at(0, 0) == 16);
  CHECK(t.at(7, 7) == 99);
  CHECK(t.lambda() == 121);
  CHECK(QuantTable(2.0).lambda() == 242);
  CHECK(QuantTable(0.5).at(0, 0) == 8);
  for (int b : kLuminanceBase) CHECK(b > 0);
  CHECK_THROWS(QuantTable(0.0));
  CHECK_THROWS(QuantTable(-1.0));
}

TEST_CASE("dct matches the direct definition") {
  std::mt19937 rng(1);
  for (int i = 0; i < 50; ++i) {
    const imagio::Block b = random_block(rng);
    const auto fast = dct2_block(b);
    const auto slow = testsupport::naive_dct2(b);
    for (int k = 0; k < 64; ++k) CHECK(fast[k] == doctest::Approx(slow[k]).epsilon(1e-12));
  }
}

TEST_CASE("dct examples") {
  CoefficientBlock zero = dct2_block(imagio::Block{});
  for (double v : zero) CHECK(v == 0.0);
  CoefficientBlock dc{};
  dc[0] = 128;
  for (double v : idct2_block(dc)) CHECK(v == doctest::Approx(16.0));
  imagio::Block flat{};
  flat.fill(100);
  CHECK(dct2_block(flat)[0] == doctest::Approx(800.0));
}

TEST_CASE("dct matrix is orthonormal") {
  const auto &m = dct_matrix();
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      double s = 0;
      for (int x = 0; x < 8; ++x) s += m[8 * i + x] * m[8 * j + x];
      CHECK(s == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("property: dct roundtrip and Parseval") {
  std::mt19937 rng(2);
  for (int i = 0; i < 200; ++i) {
    const imagio::Block b = random_block(rng, -500, 500);
    const auto c = dct2_block(b);
    const auto back = idct2_block(c);
    double e1 = 0, e2 = 0;
    for (int k = 0; k < 64; ++k) {
      CHECK(std::abs(back[k] - b[k]) <= 1e-10);
      e1 += b[k] * b[k];
      e2 += c[k] * c[k];
    }
    CHECK(e1 == doctest::Approx(e2).epsilon(1e-12));
  }
}

TEST_CASE("quantization examples") {
  CoefficientBlock c{};
  c[0] = 100;
  c[1] = -30;
  const QuantizedBlock q = quantize_block(c, QuantTable(1.0));
  CHECK(q[0] == 6);
  CHECK(q[1] == -3);
  CHECK(quantize_block(c, QuantTable(2.0))[0] == 3);
  const CoefficientBlock d = dequantize_block(q, QuantTable(1.0));
  CHECK(d[0] == 96);
  CHECK(d[1] == -33);
  for (double v : dequantize_block(QuantizedBlock{}, QuantTable(1.0))) CHECK(v == 0);
}

TEST_CASE("property: quantized entries are integral and bounded") {
  std::mt19937 rng(3);
  for (double s : {0.5, 1.0, 2.0, 3.7}) {
    const QuantTable t(s);
    for (int i = 0; i < 50; ++i) {
      const auto c = dct2_block(random_block(rng));
      const auto q = quantize_block(c, t);
      for (int k = 0; k < 64; ++k) {
        CHECK(q[k] == std::round(q[k]));
        CHECK(std::abs(q[k]) <= std::ceil(std::abs(c[k]) / t[k]) + 1);
      }
    }
  }
}

TEST_CASE("zigzag agrees with the anti-diagonal walk") {
  const auto &pi = zigzag_permutation();
  CHECK(pi[0] == 0);
  CHECK(pi[1] == 1);
  CHECK(pi[2] == 8);
  CHECK(pi[3] == 16);
  CHECK(pi[4] == 9);
  const auto walked = testsupport::walked_zigzag();
  for (int k = 0; k < 64; ++k) CHECK(pi[k] == walked[k]);
  const auto &inv = inverse_zigzag_permutation();
  for (int k = 0; k < 64; ++k) CHECK(inv[pi[k]] == k);
}

TEST_CASE("zigzag vector roundtrip and truncation") {
  std::mt19937 rng(4);
  const auto c = dct2_block(random_block(rng));
  const ZigzagVector z = to_zigzag(c);
  for (int k = 0; k < 64; ++k) CHECK(z[k] == c[zigzag_permutation()[k]]);
  CHECK(from_zigzag(z) == c);
  CHECK(truncate_zigzag(z, 6) == z);
  for (int r = 2; r <= 5; ++r) {
    const ZigzagVector t = truncate_zigzag(z, r);
    for (int k = 0; k < 64; ++k) CHECK(t[k] == (k < (1 << r) ? z[k] : 0.0));
  }
  CHECK_THROWS(truncate_zigzag(z, 1));
  CHECK_THROWS(truncate_zigzag(z, 7));
  CHECK_THROWS(validate_truncation(0));
}

TEST_CASE("decode modes") {
  CHECK(parse_decode_mode("jpeg") == DecodeMode::jpeg);
  CHECK(parse_decode_mode("jqpie_oracle") == DecodeMode::jqpie_oracle);
  CHECK(parse_decode_mode("qf_oracle") == DecodeMode::qf_oracle);
  CHECK_THROWS(parse_decode_mode("png"));
  const auto img = testsupport::random_image(20, 12, 5);
  const auto jp = classical_reference_decode(img, DecodeMode::jpeg, 6);
  CHECK(jp.dims() == img.dims());
  CHECK(classical_reference_decode(img, DecodeMode::jqpie_oracle, 6) == jp);
  const auto qf6 = classical_reference_decode(img, DecodeMode::qf_oracle, 6);
  for (std::size_t i = 0; i < img.pixels().size(); ++i) {
    CHECK(std::abs(qf6.pixels()[i] - img.pixels()[i]) < 1e-9);
  }
  CHECK_THROWS(classical_reference_decode(img, DecodeMode::jpeg, 9));
  CHECK_THROWS(classical_reference_decode(img, DecodeMode::jpeg, 6, {0.0, false}));
}

TEST_CASE("level shift keeps decode consistent") {
  const auto img = testsupport::smooth_image(16, 16, 1);
  const auto qf = classical_reference_decode(img, DecodeMode::qf_oracle, 6, {1.0, true});
  for (std::size_t i = 0; i < img.pixels().size(); ++i) {
    CHECK(std::abs(qf.pixels()[i] - img.pixels()[i]) < 1e-9);
  }
  const auto a = classical_reference_decode(img, DecodeMode::jpeg, 6, {1.0, true});
  const auto b = classical_reference_decode(img, DecodeMode::jpeg, 6, {1.0, false});
  CHECK_FALSE(a == b);
}

TEST_CASE("sparsity statistics") {
  imagio::GrayscaleImage flat(256, 256);
  for (double &p : flat.pixels()) p = 128;
  const SparsityStats st = sparsity_stats(flat);
  CHECK(st.pixel_count == 65536);
  CHECK(st.block_count == 1024);
  CHECK(st.nonzero == 1024);
  CHECK(st.compression_ratio == doctest::Approx(64.0));
  CHECK(st.histogram[0] == 1.0);
  CHECK(st.histogram[1] == 0.0);

  CHECK_THROWS_AS(sparsity_stats(imagio::GrayscaleImage(16, 16)), std::domain_error);

  // N counts padded pixels: a 9x9 image occupies four blocks.
  const auto s9 = sparsity_stats(testsupport::random_image(9, 9, 1));
  CHECK(s9.pixel_count == 256);
  double sum = 0;
  for (double h : s9.histogram) sum += h;
  CHECK(sum == doctest::Approx(double(s9.nonzero) / double(s9.block_count)));
}
