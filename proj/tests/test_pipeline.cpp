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
#include <numeric>

#include "doctest.h"
#include "jqpie/jpeg.hpp"
#include "jqpie/pipeline.hpp"
#include "support.hpp"

using namespace jqpie;
using namespace jqpie::pipeline;

namespace {

double max_abs_diff(const imagio::GrayscaleImage &a, const imagio::GrayscaleImage &b) {
  REQUIRE(a.dims() == b.dims());
  double m = 0;
  for (std::size_t i = 0; i < a.pixels().size(); ++i) {
    m = std::max(m, std::abs(a.pixels()[i] - b.pixels()[i]));
  }
  return m;
}

double l2(const imagio::GrayscaleImage &a, const imagio::GrayscaleImage &b) {
  double s = 0;
  for (std::size_t i = 0; i < a.pixels().size(); ++i) {
    s += std::pow(a.pixels()[i] - b.pixels()[i], 2);
  }
  return std::sqrt(s);
}

/**
 * Post-selection probability from classical data only: quantized truncated
 * coefficients, globally normalized, scaled by Q/lambda at their frequency.
 * Uses the library DCT so that rounding ties at exact half-steps resolve the
 * same way as in the pipeline.
 */
double classical_probability(const imagio::GrayscaleImage &img, int r, double scale) {
  const auto padded = imagio::pad_to_power_of_two(img, 8);
  const jpeg::QuantTable t(scale);
  const auto walk = testsupport::walked_zigzag();
  double num = 0, den = 0;
  for (std::size_t br = 0; br < padded.height(); br += 8) {
    for (std::size_t bc = 0; bc < padded.width(); bc += 8) {
      std::array<double, 64> b{};
      for (int x = 0; x < 8; ++x) {
        for (int y = 0; y < 8; ++y) b[std::size_t(8 * x + y)] = padded(br + x, bc + y);
      }
      const auto c = jpeg::dct2_block(b);
      for (int k = 0; k < (1 << r); ++k) {
        const int f = walk[std::size_t(k)];
        const double q = std::round(c[std::size_t(f)] / t[f]);
        den += q * q;
        num += std::pow(q * t[f] / t.lambda(), 2);
      }
    }
  }
  return num / den;
}

PipelineOptions opts(int r, double s = 1.0) {
  PipelineOptions o;
  o.r = r;
  o.scale = s;
  return o;
}

}  // namespace

TEST_CASE("QPIE direct examples") {
  const auto img = imagio::GrayscaleImage::from_rows({{3, 0}, {0, 4}});
  const PipelineResult res = run_qpie_direct(img);
  REQUIRE(res.state.dim() == 4);
  CHECK(res.state[0].real() == doctest::Approx(0.6));
  CHECK(std::abs(res.state[1]) < 1e-15);
  CHECK(std::abs(res.state[2]) < 1e-15);
  CHECK(res.state[3].real() == doctest::Approx(0.8));
  CHECK(res.norm_record.global_norm == doctest::Approx(5.0));
  // Column-major: pixel (x=1, y=0) sits at index 1.
  const auto col = run_qpie_direct(imagio::GrayscaleImage::from_rows({{0, 0}, {1, 0}}));
  CHECK(col.state[1].real() == doctest::Approx(1.0));

  imagio::GrayscaleImage flat(4, 8);
  for (double &p : flat.pixels()) p = 7;
  const auto u = run_qpie_direct(flat);
  for (std::size_t i = 0; i < u.state.dim(); ++i) {
    CHECK(u.state[i].real() == doctest::Approx(1 / std::sqrt(32.0)));
  }
  CHECK_THROWS_AS(run_qpie_direct(imagio::GrayscaleImage(4, 4)), std::domain_error);
}

TEST_CASE("QPIE readout inverts the normalization") {
  for (auto dims : {std::pair{16, 16}, std::pair{9, 13}, std::pair{1, 5}}) {
    const auto img = testsupport::random_image(dims.first, dims.second, 3);
    for (auto be : {sim::Backend::operator_level, sim::Backend::gate_exact}) {
      PipelineOptions o;
      o.backend = be;
      const auto res = run_qpie_direct(img, o);
      CHECK(max_abs_diff(res.reconstructed, img) < 1e-9);
      CHECK(res.reconstructed.dims() == img.dims());
    }
  }
  const auto big = run_qpie_direct(imagio::GrayscaleImage(1, 1, std::vector<double>{5.0}));
  CHECK(big.reconstructed(0, 0) == doctest::Approx(5.0));
}

TEST_CASE("QPIE resources are full-width state prep") {
  const auto res = run_qpie_direct(testsupport::random_image(16, 16, 1));
  CHECK(res.resources.cx_count == 254);
  CHECK(res.resources.breakdown.size() == 1);
  CHECK(synth::closed_form_resources(8, 8, 6, synth::Method::qpie).cx_count == 65534);
}

TEST_CASE("JQPIE r=6 equals the JPEG decoder") {
  for (std::uint32_t seed = 0; seed < 4; ++seed) {
    const auto img = testsupport::random_image(16, 16, seed);
    const auto res = run_jqpie(img, opts(6));
    const auto ref = jpeg::classical_reference_decode(img, jpeg::DecodeMode::jpeg, 6);
    CHECK(max_abs_diff(res.reconstructed, ref) <= 1e-6);
    CHECK(res.success_probability > 0);
    CHECK(res.success_probability <= 1);
  }
}

TEST_CASE("oracle equivalence over sizes, r and S") {
  const std::vector<std::pair<std::size_t, std::size_t>> sizes = {
      {8, 8}, {16, 16}, {24, 40}, {9, 17}, {64, 32}};
  std::uint32_t seed = 100;
  for (auto [h, w] : sizes) {
    const auto img = (seed % 2) ? testsupport::smooth_image(h, w, seed)
                                : testsupport::random_image(h, w, seed);
    ++seed;
    for (int r = 2; r <= 6; ++r) {
      for (double s : {0.5, 1.0, 2.0}) {
        const jpeg::JpegOptions jo{s, false};
        const auto jq = run_jqpie(img, opts(r, s));
        CHECK(max_abs_diff(jq.reconstructed, jpeg::classical_reference_decode(
                                                 img, jpeg::DecodeMode::jqpie_oracle, r, jo)) <= 1e-6);
        CHECK(jq.success_probability ==
              doctest::Approx(classical_probability(img, r, s)).epsilon(1e-10));
      }
      const auto qf = run_qf_jqpie(img, opts(r));
      CHECK(qf.success_probability == 1.0);
      CHECK(max_abs_diff(qf.reconstructed, jpeg::classical_reference_decode(
                                               img, jpeg::DecodeMode::qf_oracle, r)) <= 1e-6);
    }
  }
}

TEST_CASE("QF-JQPIE at r=6 reproduces the QPIE state") {
  for (std::uint32_t seed = 0; seed < 3; ++seed) {
    for (std::size_t n : {8, 16, 32}) {
      const auto img = testsupport::random_image(n, 2 * n, seed);
      const auto qf = run_qf_jqpie(img, opts(6));
      const auto qp = run_qpie_direct(img);
      const auto raster = to_raster_order(qf.state, qf.geometry);
      CHECK(sim::state_fidelity(raster, qp.state) >= 1 - 1e-10);
    }
  }
}

TEST_CASE("stage states") {
  const auto img = testsupport::random_image(16, 16, 9);
  for (int r = 2; r <= 6; ++r) {
    PipelineOptions o = opts(r);
    o.keep_stage_states = true;
    const auto res = run_jqpie(img, o);
    REQUIRE(res.stage_states.size() == 4);
    CHECK(res.stage_states[0].first == "state_prep");
    CHECK(res.stage_states[1].first == "inverse_zigzag");
    CHECK(res.stage_states[2].first == "inverse_quantization");
    CHECK(res.stage_states[3].first == "inverse_qdct");
    const auto &phi1 = res.stage_states[0].second;
    const auto &phi2 = res.stage_states[1].second;
    const auto walk = testsupport::walked_zigzag();
    for (std::size_t j = 0; j < 4; ++j) {
      for (int k = 0; k < 64; ++k) {
        const std::size_t slot = j * 64 + std::size_t(k);
        if (k >= (1 << r)) {
          CHECK(std::abs(phi1[slot]) == 0.0);
          continue;
        }
        CHECK(std::abs(phi2[j * 64 + std::size_t(walk[std::size_t(k)])] - phi1[slot]) < 1e-14);
      }
    }
    // The inverse-quantization stage scales each frequency by d_k.
    const jpeg::QuantTable t(1.0);
    const auto &phi3 = res.stage_states[2].second;
    for (std::size_t i = 0; i < 256; ++i) {
      CHECK(std::abs(phi3[i] - phi2[i] * (t[int(i % 64)] / t.lambda())) < 1e-13);
    }
  }
}

TEST_CASE("success probability is one on lambda-valued frequencies") {
  // Cosine basis image at (u,v) = (6,5), where Q = lambda.
  const auto &m = jpeg::dct_matrix();
  imagio::GrayscaleImage img(8, 8);
  for (int x = 0; x < 8; ++x) {
    for (int y = 0; y < 8; ++y) img(std::size_t(x), std::size_t(y)) = 1210 * m[8 * 6 + x] * m[8 * 5 + y];
  }
  const auto res = run_jqpie(img, opts(6));
  CHECK(res.success_probability == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("backends agree") {
  const auto img = testsupport::random_image(16, 16, 4);
  for (int r = 2; r <= 6; ++r) {
    for (auto fn : {&run_jqpie, &run_qf_jqpie}) {
      PipelineOptions a = opts(r), b = opts(r);
      b.backend = sim::Backend::gate_exact;
      const auto ra = fn(img, a);
      const auto rb = fn(img, b);
      CHECK(sim::l2_distance(ra.state, rb.state) <= 1e-8);
      CHECK(ra.resources.total() == rb.resources.total());
    }
  }
}

TEST_CASE("resources match the closed form, and the lowered schedule") {
  const auto img = testsupport::random_image(16, 32, 5);
  for (int r = 2; r <= 6; ++r) {
    const auto jq = run_jqpie(img, opts(r));
    const auto cf = synth::closed_form_resources(4, 5, r, synth::Method::jqpie);
    CHECK(jq.resources.total() == cf.total());
    REQUIRE(jq.resources.breakdown.size() == cf.breakdown.size());
    for (std::size_t i = 0; i < cf.breakdown.size(); ++i) {
      CHECK(jq.resources.breakdown[i] == cf.breakdown[i]);
    }
    CHECK(circuit::resource_counts(synth::lower(jq.circuit)).total() == cf.total());
    const auto qf = run_qf_jqpie(img, opts(r));
    CHECK(qf.resources.total() ==
          synth::closed_form_resources(4, 5, r, synth::Method::qf_jqpie).total());
    PipelineOptions ab = opts(r);
    ab.abstract_perm = true;
    CHECK(run_jqpie(img, ab).resources.stage("inverse_zigzag")->cx == 0);
  }
}

TEST_CASE("per-block normalization") {
  const auto img = testsupport::smooth_image(24, 16, 2);
  for (int r : {3, 6}) {
    PipelineOptions o = opts(r);
    o.norm_mode = NormMode::per_block;
    const auto jq = run_jqpie(img, o);
    CHECK(jq.norm_record.per_block_norms.size() == 8);
    CHECK(jq.norm_record.mode == NormMode::per_block);
    CHECK(max_abs_diff(jq.reconstructed, jpeg::classical_reference_decode(
                                             img, jpeg::DecodeMode::jqpie_oracle, r)) <= 1e-6);
    const auto qf = run_qf_jqpie(img, o);
    CHECK(max_abs_diff(qf.reconstructed, jpeg::classical_reference_decode(
                                             img, jpeg::DecodeMode::qf_oracle, r)) <= 1e-6);
  }
  // Equal-energy blocks: both modes give the same state and image.
  const auto tile = testsupport::random_image(8, 8, 3);
  imagio::GrayscaleImage tiled(16, 16);
  for (std::size_t r = 0; r < 16; ++r) {
    for (std::size_t c = 0; c < 16; ++c) tiled(r, c) = tile(r % 8, c % 8);
  }
  PipelineOptions pb = opts(4);
  pb.norm_mode = NormMode::per_block;
  const auto a = run_jqpie(tiled, opts(4));
  const auto b = run_jqpie(tiled, pb);
  CHECK(sim::l2_distance(a.state, b.state) < 1e-12);
  CHECK(max_abs_diff(a.reconstructed, b.reconstructed) < 1e-9);
}

TEST_CASE("degenerate blocks") {
  imagio::GrayscaleImage img(16, 16);
  for (std::size_t r = 0; r < 8; ++r) {
    for (std::size_t c = 0; c < 8; ++c) img(r, c) = double((r * 8 + c) % 200);
  }
  for (NormMode m : {NormMode::global, NormMode::per_block}) {
    PipelineOptions o = opts(5);
    o.norm_mode = m;
    const auto res = run_jqpie(img, o);
    CHECK(res.norm_record.active_blocks == 1);
    for (std::size_t r = 8; r < 16; ++r) {
      for (std::size_t c = 0; c < 16; ++c) CHECK(std::abs(res.reconstructed(r, c)) < 1e-9);
    }
    if (m == NormMode::per_block) CHECK(res.norm_record.per_block_norms[3] == 0.0);
  }
}

TEST_CASE("pipeline errors") {
  CHECK_THROWS_AS(run_jqpie(imagio::GrayscaleImage(16, 16), opts(6)), std::domain_error);
  imagio::GrayscaleImage faint(8, 8);
  for (double &p : faint.pixels()) p = 0.9;  // DC quantizes to zero
  CHECK_THROWS_WITH_AS(run_jqpie(faint, opts(6)), "zero truncated-coefficient vector",
                       std::domain_error);
  CHECK_NOTHROW(run_qf_jqpie(faint, opts(6)));
  const auto img = testsupport::random_image(8, 8, 1);
  CHECK_THROWS(run_jqpie(img, opts(1)));
  CHECK_THROWS(run_jqpie(img, opts(7)));
  CHECK_THROWS(run_jqpie(img, opts(6, 0.0)));
  CHECK_THROWS(run_qf_jqpie(img, opts(9)));
}

TEST_CASE("readout models") {
  Geometry g;
  g.original = {1, 2};
  g.padded = {1, 2};
  g.h = 0;
  g.w = 1;
  g.layout = StateLayout::raster_column_major;
  NormalizationRecord n;
  n.global_norm = 2.5;
  const sim::StateVector s(1, {0.6, -0.8});
  const auto amp = readout_image(s, n, g, ReadoutModel::amplitude);
  const auto meas = readout_image(s, n, g, ReadoutModel::measurement);
  CHECK(amp(0, 1) == doctest::Approx(-2.0));
  CHECK(meas(0, 1) == doctest::Approx(2.0));
  CHECK(meas(0, 0) == doctest::Approx(1.5));
  CHECK_THROWS(readout_image(sim::StateVector(3), n, g));

  const auto img = testsupport::random_image(16, 8, 7);
  const auto res = run_qf_jqpie(img, opts(3));
  const auto m = readout_image(res.state, res.norm_record, res.geometry,
                               ReadoutModel::measurement);
  for (std::size_t i = 0; i < m.pixels().size(); ++i) {
    CHECK(m.pixels()[i] == doctest::Approx(std::abs(res.reconstructed.pixels()[i])));
  }
}

TEST_CASE("monotone information under truncation") {
  for (std::uint32_t seed = 0; seed < 3; ++seed) {
    const auto img = testsupport::smooth_image(32, 32, seed);
    double prev = INFINITY;
    for (int r = 2; r <= 6; ++r) {
      const double e = l2(img, run_qf_jqpie(img, opts(r)).reconstructed);
      CHECK(e <= prev + 1e-9);
      prev = e;
    }
    CHECK(prev < 1e-8);
  }
}

TEST_CASE("level shift") {
  const auto img = testsupport::smooth_image(16, 16, 4);
  PipelineOptions o = opts(4);
  o.level_shift = true;
  const auto res = run_jqpie(img, o);
  CHECK(res.norm_record.level_offset == 128.0);
  CHECK(max_abs_diff(res.reconstructed,
                     jpeg::classical_reference_decode(img, jpeg::DecodeMode::jqpie_oracle, 4,
                                                      {1.0, true})) <= 1e-6);
}

TEST_CASE("geometry and json") {
  const auto img = testsupport::random_image(9, 20, 1);
  const auto res = run_jqpie(img, opts(5));
  CHECK(res.geometry.padded == imagio::Dims{16, 32});
  CHECK(res.geometry.index_qubits() == 3);
  CHECK(res.state.num_qubits() == 10);
  CHECK(res.reconstructed.dims() == img.dims());
  const nlohmann::json j = to_json(res);
  CHECK(j["method"] == "jqpie");
  CHECK(j["normalization"]["lambda"] == 121.0);
  CHECK(j["resources"]["breakdown"].contains("inverse_quantization"));
  CHECK(j["geometry"]["qubits"] == 10);
  CHECK(parse_norm_mode("per-block") == NormMode::per_block);
  CHECK_THROWS(parse_norm_mode("x"));
  CHECK(run(synth::Method::qpie, img).method == synth::Method::qpie);
}
