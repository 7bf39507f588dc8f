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

#include "jqpie/pipeline.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "jqpie/jpeg.hpp"

namespace jqpie::pipeline {

using circuit::Circuit;
using circuit::Register;

NormMode parse_norm_mode(std::string_view s) {
  if (s == "global") return NormMode::global;
  if (s == "per_block" || s == "per-block") return NormMode::per_block;
  throw std::invalid_argument("unknown normalization mode: " + std::string(s));
}

std::string_view to_string(NormMode m) {
  return m == NormMode::global ? "global" : "per_block";
}

namespace {

int log2_exact(std::size_t v) { return std::countr_zero(v); }

struct Stage {
  std::string name;
  Circuit circuit;
};

/** Run the stages in order, collecting snapshots and the composed circuit. */
sim::StateVector simulate_stages(
    const std::vector<Stage> &stages, int num_qubits,
    const PipelineOptions &opts, PipelineResult &res) {
  sim::StateVector sv(num_qubits);
  for (const Stage &st : stages) {
    const Circuit run = opts.backend == sim::Backend::gate_exact
                            ? synth::lower(st.circuit)
                            : st.circuit;
    sv = sim::apply_circuit(std::move(sv), run, opts.backend);
    if (opts.keep_stage_states) res.stage_states.emplace_back(st.name, sv);
  }
  Circuit full(stages.front().circuit.registers());
  for (const Stage &st : stages) full = circuit::compose(full, st.circuit);
  res.resources = circuit::resource_counts(full);
  res.circuit = std::move(full);
  return sv;
}

/** Per-block truncated zigzag vectors, 2^r entries each. */
std::vector<std::vector<double>> truncated_vectors(
    const imagio::GrayscaleImage &padded, int r, bool quantize,
    const PipelineOptions &opts) {
  const jpeg::JpegOptions jo{opts.scale, opts.level_shift};
  const jpeg::QuantTable table(opts.scale);
  const imagio::BlockGrid grid = imagio::pad_and_partition(padded);
  const auto coeffs = jpeg::forward_dct(grid, jo);
  const std::size_t kept = std::size_t(1) << r;
  std::vector<std::vector<double>> out(coeffs.size());
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    const jpeg::ZigzagVector zz = jpeg::to_zigzag(
        quantize ? jpeg::quantize_block(coeffs[j], table) : coeffs[j]);
    out[j].assign(zz.begin(), zz.begin() + std::ptrdiff_t(kept));
  }
  return out;
}

double sum_sq(const std::vector<double> &v) {
  return std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
}

PipelineResult run_jpeg_variant(
    const imagio::GrayscaleImage &img, const PipelineOptions &opts,
    bool quantized) {
  jpeg::validate_truncation(opts.r);
  if (!(opts.scale > 0)) throw std::invalid_argument("scale must be positive");
  if (img.empty()) throw std::invalid_argument("empty image");

  PipelineResult res;
  res.method = quantized ? synth::Method::jqpie : synth::Method::qf_jqpie;
  const imagio::GrayscaleImage padded = imagio::pad_to_power_of_two(img, 8);
  Geometry &geo = res.geometry;
  geo.original = img.dims();
  geo.padded = padded.dims();
  geo.h = log2_exact(padded.height());
  geo.w = log2_exact(padded.width());
  geo.layout = StateLayout::blocked;
  geo.has_ancilla = quantized;

  const int r = opts.r;
  const int nidx = geo.index_qubits();
  const auto vecs = truncated_vectors(padded, r, quantized, opts);

  NormalizationRecord &norm = res.norm_record;
  norm.mode = opts.norm_mode;
  norm.level_offset = opts.level_shift ? 128.0 : 0.0;
  const jpeg::QuantTable table(opts.scale);
  norm.lambda = quantized ? table.lambda() : 1.0;

  double total = 0;
  for (const auto &v : vecs) {
    const double s = sum_sq(v);
    total += s;
    if (s > 0) ++norm.active_blocks;
  }
  if (!(total > 0)) {
    throw std::domain_error("zero truncated-coefficient vector");
  }
  norm.global_norm = std::sqrt(total);

  const std::size_t kept = std::size_t(1) << r;
  std::vector<double> amps(vecs.size() * kept, 0.0);
  if (opts.norm_mode == NormMode::global) {
    for (std::size_t j = 0; j < vecs.size(); ++j) {
      for (std::size_t k = 0; k < kept; ++k) {
        amps[j * kept + k] = vecs[j][k] / norm.global_norm;
      }
    }
  } else {
    const double weight = 1.0 / std::sqrt(double(norm.active_blocks));
    norm.per_block_norms.resize(vecs.size());
    for (std::size_t j = 0; j < vecs.size(); ++j) {
      const double a = std::sqrt(sum_sq(vecs[j]));
      norm.per_block_norms[j] = a;
      if (a == 0) continue;
      for (std::size_t k = 0; k < kept; ++k) {
        amps[j * kept + k] = weight * vecs[j][k] / a;
      }
    }
  }

  std::vector<std::pair<std::string, int>> sizes = {
      {"data", 6}, {"index", nidx}};
  if (quantized) sizes.emplace_back("ancilla", 1);
  const std::vector<Register> layout = circuit::make_layout(sizes);
  const int nq = 6 + nidx + (quantized ? 1 : 0);

  std::vector<int> load_targets;
  for (int b = 0; b < r; ++b) load_targets.push_back(b);
  for (int b = 0; b < nidx; ++b) load_targets.push_back(6 + b);

  std::vector<Stage> stages;
  {
    Circuit c(layout);
    c.append(synth::state_prep_gate(load_targets, amps));
    stages.push_back({"state_prep", c.with_stage("state_prep")});
  }
  const std::vector<int> data_map = {0, 1, 2, 3, 4, 5};
  {
    synth::ZigzagOptions zo;
    zo.abstract_perm = opts.abstract_perm;
    const Circuit zz = synth::synth_truncated_zigzag(r, zo);
    stages.push_back(
        {"inverse_zigzag",
         circuit::embed(zz, layout, data_map).with_stage("inverse_zigzag")});
  }
  if (quantized) {
    const auto iq = synth::synth_inverse_quantization(table, false);
    const std::vector<int> map = {0, 1, 2, 3, 4, 5, nq - 1};
    stages.push_back(
        {"inverse_quantization", circuit::embed(iq.circuit, layout, map)
                                     .with_stage("inverse_quantization")});
  }
  stages.push_back(
      {"inverse_qdct", circuit::embed(synth::synth_inverse_qdct(), layout,
                                      data_map)
                           .with_stage("inverse_qdct")});

  sim::StateVector sv = simulate_stages(stages, nq, opts, res);
  if (quantized) {
    sim::PostSelectResult ps = sim::postselect(sv, nq - 1, 0);
    res.state = std::move(ps.state);
    res.success_probability = ps.probability;
  } else {
    res.state = std::move(sv);
    res.success_probability = 1.0;
  }
  norm.branch_probability = res.success_probability;
  res.reconstructed = readout_image(res.state, norm, geo);
  return res;
}

}  // namespace

PipelineResult run_qpie_direct(
    const imagio::GrayscaleImage &img, const PipelineOptions &opts) {
  if (img.empty()) throw std::invalid_argument("empty image");
  PipelineResult res;
  res.method = synth::Method::qpie;
  const imagio::GrayscaleImage padded = imagio::pad_to_power_of_two(img, 1);
  Geometry &geo = res.geometry;
  geo.original = img.dims();
  geo.padded = padded.dims();
  geo.h = log2_exact(padded.height());
  geo.w = log2_exact(padded.width());
  geo.layout = StateLayout::raster_column_major;

  const std::size_t hp = padded.height();
  const std::size_t wp = padded.width();
  std::vector<double> amps(hp * wp);
  double total = 0;
  for (std::size_t y = 0; y < wp; ++y) {
    for (std::size_t x = 0; x < hp; ++x) {
      amps[y * hp + x] = padded(x, y);
      total += padded(x, y) * padded(x, y);
    }
  }
  if (!(total > 0)) throw std::domain_error("all-zero image");
  NormalizationRecord &norm = res.norm_record;
  norm.global_norm = std::sqrt(total);
  for (double &a : amps) a /= norm.global_norm;

  const int nq = geo.h + geo.w;
  const std::vector<Register> layout =
      circuit::make_layout({{"row", geo.h}, {"col", geo.w}});
  Circuit c(layout);
  if (nq > 0) {
    std::vector<int> targets(static_cast<std::size_t>(nq));
    std::iota(targets.begin(), targets.end(), 0);
    c.append(synth::state_prep_gate(targets, amps));
  }
  std::vector<Stage> stages = {{"state_prep", c.with_stage("state_prep")}};
  res.state = simulate_stages(stages, nq, opts, res);
  res.success_probability = 1.0;
  res.reconstructed = readout_image(res.state, norm, geo);
  return res;
}

PipelineResult run_jqpie(
    const imagio::GrayscaleImage &img, const PipelineOptions &opts) {
  return run_jpeg_variant(img, opts, true);
}

PipelineResult run_qf_jqpie(
    const imagio::GrayscaleImage &img, const PipelineOptions &opts) {
  return run_jpeg_variant(img, opts, false);
}

PipelineResult run(
    synth::Method method, const imagio::GrayscaleImage &img,
    const PipelineOptions &opts) {
  switch (method) {
    case synth::Method::qpie:
      return run_qpie_direct(img, opts);
    case synth::Method::jqpie:
      return run_jqpie(img, opts);
    case synth::Method::qf_jqpie:
      return run_qf_jqpie(img, opts);
  }
  throw std::invalid_argument("unknown method");
}

imagio::GrayscaleImage readout_image(
    const sim::StateVector &state, const NormalizationRecord &norm,
    const Geometry &geo, ReadoutModel model) {
  const std::size_t hp = geo.padded.height;
  const std::size_t wp = geo.padded.width;
  const int image_qubits = geo.h + geo.w;
  const int expected = image_qubits + (geo.has_ancilla ? 1 : 0);
  if (state.num_qubits() != expected && state.num_qubits() != image_qubits) {
    throw std::invalid_argument("state does not match the image geometry");
  }
  if (geo.original.height > hp || geo.original.width > wp) {
    throw std::invalid_argument("original dims exceed padded dims");
  }
  auto value = [&](std::size_t idx) {
    const sim::amp_t a = state[idx];
    return model == ReadoutModel::amplitude ? a.real() : std::abs(a);
  };
  // The post-selected branch is renormalized; sqrt(p) undoes that.
  const double base = std::sqrt(norm.branch_probability) * norm.lambda;

  imagio::GrayscaleImage out(geo.original.height, geo.original.width);
  if (geo.layout == StateLayout::raster_column_major) {
    for (std::size_t x = 0; x < geo.original.height; ++x) {
      for (std::size_t y = 0; y < geo.original.width; ++y) {
        out(x, y) =
            value(y * hp + x) * base * norm.global_norm + norm.level_offset;
      }
    }
    return out;
  }

  const std::size_t nby = geo.blocks_y();
  const std::size_t nblocks = (hp / 8) * nby;
  std::vector<double> scale(nblocks, base * norm.global_norm);
  if (norm.mode == NormMode::per_block) {
    if (norm.per_block_norms.size() != nblocks) {
      throw std::invalid_argument("per-block norms do not match block count");
    }
    const double w = std::sqrt(double(norm.active_blocks));
    for (std::size_t j = 0; j < nblocks; ++j) {
      scale[j] = base * norm.per_block_norms[j] * w;
    }
  }
  for (std::size_t row = 0; row < geo.original.height; ++row) {
    for (std::size_t col = 0; col < geo.original.width; ++col) {
      const std::size_t j = (row / 8) * nby + col / 8;
      const std::size_t k = (row % 8) * 8 + col % 8;
      out(row, col) = value(j * 64 + k) * scale[j] + norm.level_offset;
    }
  }
  return out;
}

sim::StateVector to_raster_order(
    const sim::StateVector &blocked, const Geometry &geo) {
  if (blocked.num_qubits() != geo.h + geo.w) {
    throw std::invalid_argument("state must cover exactly the image qubits");
  }
  const std::size_t hp = geo.padded.height;
  const std::size_t nby = geo.blocks_y();
  std::vector<sim::amp_t> out(blocked.dim());
  for (std::size_t idx = 0; idx < blocked.dim(); ++idx) {
    const std::size_t j = idx / 64;
    const std::size_t k = idx % 64;
    const std::size_t row = (j / nby) * 8 + k / 8;
    const std::size_t col = (j % nby) * 8 + k % 8;
    out[col * hp + row] = blocked[idx];
  }
  return sim::StateVector(blocked.num_qubits(), std::move(out));
}

nlohmann::json to_json(const PipelineResult &r) {
  nlohmann::json j;
  j["method"] = synth::to_string(r.method);
  j["success_probability"] = r.success_probability;
  const NormalizationRecord &n = r.norm_record;
  j["normalization"] = {
      {"mode", to_string(n.mode)},
      {"global_norm", n.global_norm},
      {"lambda", n.lambda},
      {"active_blocks", n.active_blocks},
      {"branch_probability", n.branch_probability},
      {"level_offset", n.level_offset},
  };
  if (n.mode == NormMode::per_block) {
    j["normalization"]["per_block_norms"] = n.per_block_norms;
  }
  j["resources"] = r.resources;
  const Geometry &g = r.geometry;
  j["geometry"] = {
      {"original", {g.original.height, g.original.width}},
      {"padded", {g.padded.height, g.padded.width}},
      {"qubits", r.circuit.num_qubits()},
      {"layout", g.layout == StateLayout::blocked ? "blocked"
                                                  : "raster_column_major"},
  };
  return j;
}

}  // namespace jqpie::pipeline
