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

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jqpie/circuit.hpp"
#include "jqpie/image.hpp"
#include "jqpie/statevector.hpp"
#include "jqpie/synth.hpp"

namespace jqpie::pipeline {

/**
 * global: one scalar normalizes every loaded coefficient, so relative block
 * brightness survives in the amplitudes. per_block: each non-degenerate
 * block is normalized by its own truncated norm and weighted equally; the
 * norms travel as classical side information for readout.
 */
enum class NormMode { global, per_block };
NormMode parse_norm_mode(std::string_view s);
std::string_view to_string(NormMode m);

/** amplitude keeps signs; measurement takes sqrt(probability) and loses them. */
enum class ReadoutModel { amplitude, measurement };

enum class StateLayout {
  /// QPIE: index = y * H + x (column-major vectorization).
  raster_column_major,
  /// index = j * 64 + 8x + y, block j row-major over the block grid.
  blocked,
};

struct Geometry {
  imagio::Dims original{};
  imagio::Dims padded{};  // power-of-two extents
  int h = 0;              // log2 padded height
  int w = 0;              // log2 padded width
  StateLayout layout = StateLayout::blocked;
  bool has_ancilla = false;

  std::size_t blocks_y() const { return padded.width / 8; }
  int index_qubits() const { return h + w - 6; }
};

struct NormalizationRecord {
  double global_norm = 0;  // L2 norm of the loaded coefficient vector
  double lambda = 1.0;     // inverse-quantization normalizer (JQPIE)
  NormMode mode = NormMode::global;
  /** A_j (JQPIE) or K_j (QF-JQPIE) per block, per_block mode only. */
  std::vector<double> per_block_norms;
  /** Blocks with a non-zero truncated vector (the per_block weighting). */
  std::size_t active_blocks = 0;
  /** Probability of the post-selected ancilla branch; 1 without ancilla. */
  double branch_probability = 1.0;
  /** Intensity offset added back at readout (128 with level shift). */
  double level_offset = 0.0;
};

struct PipelineOptions {
  int r = 6;
  double scale = 1.0;
  sim::Backend backend = sim::Backend::operator_level;
  NormMode norm_mode = NormMode::global;
  bool abstract_perm = false;
  bool level_shift = false;
  bool keep_stage_states = false;
};

struct PipelineResult {
  synth::Method method = synth::Method::jqpie;
  /** Final state; post-selected onto |0>_a when an ancilla is present. */
  sim::StateVector state;
  double success_probability = 1.0;
  NormalizationRecord norm_record;
  circuit::ResourceReport resources;
  /** Amplitude-model readout, original dims, not clamped. */
  imagio::GrayscaleImage reconstructed;
  Geometry geometry;
  /** Composite-gate circuit, stage tagged. */
  circuit::Circuit circuit;
  /** Snapshots after each stage when keep_stage_states is set. */
  std::vector<std::pair<std::string, sim::StateVector>> stage_states;
};

/** Pixels / global norm in column-major order; full-width state prep. */
PipelineResult run_qpie_direct(
    const imagio::GrayscaleImage &img, const PipelineOptions &opts = {});

/**
 * JPEG-assisted preparation: quantized, zigzag-truncated coefficients are
 * loaded on the active qubits, then inverse zigzag, block-encoded inverse
 * quantization, inverse 2D QDCT, and post-selection of |0>_a.
 */
PipelineResult run_jqpie(
    const imagio::GrayscaleImage &img, const PipelineOptions &opts = {});

/** Quantization-free variant: unitary, no ancilla, no post-selection. */
PipelineResult run_qf_jqpie(
    const imagio::GrayscaleImage &img, const PipelineOptions &opts = {});

PipelineResult run(
    synth::Method method, const imagio::GrayscaleImage &img,
    const PipelineOptions &opts = {});

/** Rescale a final state back to pixels and crop to the original dims. */
imagio::GrayscaleImage readout_image(
    const sim::StateVector &state, const NormalizationRecord &norm,
    const Geometry &geometry, ReadoutModel model = ReadoutModel::amplitude);

/**
 * Reorder a blocked image state (no ancilla) into the column-major QPIE
 * layout; a pure qubit relabeling for power-of-two extents.
 */
sim::StateVector to_raster_order(
    const sim::StateVector &blocked, const Geometry &geometry);

/** Probability, norms, resources and geometry. */
nlohmann::json to_json(const PipelineResult &r);

}  // namespace jqpie::pipeline
