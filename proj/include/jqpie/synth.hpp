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
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "jqpie/circuit.hpp"
#include "jqpie/jpeg.hpp"

namespace jqpie::synth {

using circuit::Circuit;
using circuit::Cost;
using circuit::Gate;

enum class Method { qpie, jqpie, qf_jqpie };
Method parse_method(std::string_view s);
std::string_view to_string(Method m);

/** Receives lowered gates one at a time. */
using GateSink = std::function<void(Gate)>;

/**
 * Gray-code angle transform for a uniformly controlled rotation: given the
 * rotation wanted for every control value, return the angles of the
 * alternating rotation/CX sequence.
 */
std::vector<double> multiplexed_angles(std::span<const double> per_control);

/**
 * Uniformly controlled RY or RZ on target: 2^k rotations and, for k >= 1,
 * 2^k CX gates. per_control[c] is applied when controls[b] hold bit b of c.
 */
void emit_multiplexed_rotation(
    circuit::GateKind axis, std::span<const int> controls, int target,
    std::span<const double> per_control, const GateSink &sink);

/**
 * RY-only cascade loading real amplitudes onto targets (targets[b] carries
 * bit b of the amplitude index). Emits 2^m - 1 rotations and 2^m - 2 CX.
 */
void emit_state_prep(
    std::span<const double> amplitudes, std::span<const int> targets,
    const GateSink &sink);

/** Exact cost of the m-qubit cascade (angles do not affect it). */
Cost state_prep_cost(int m);

/**
 * Lowered cascade on m = log2(len) qubits, qubit b = bit b of the index.
 * Throws std::invalid_argument for non power-of-two or non-normalized
 * input.
 */
Circuit synth_state_prep(std::span<const double> amplitudes);

/** Composite state_prep gate with its exact declared cost. */
Gate state_prep_gate(std::vector<int> targets, std::vector<double> amplitudes);

/**
 * Truncated inverse-zigzag map P_r over the 64 data-register states.
 * Slot k < 2^r goes to frequency pi(k); frequencies displaced from beyond
 * the retained window are sent back, in ascending order, to the freed
 * slots; everything else is fixed.
 */
std::vector<std::uint32_t> truncated_zigzag_map(int r);

/**
 * Transposition network for a basis permutation on the target qubits.
 * Each transposition is a multi-controlled X conjugated by CX/X gates; the
 * multi-controlled X is a diagonal phase flip between two RY(pi/2)-X
 * Hadamards, with the diagonal built from uniformly controlled RZ layers.
 * The network's global phase is added to out.
 */
void emit_permutation(
    std::span<const std::uint32_t> mapping, std::span<const int> targets,
    const GateSink &sink, double &global_phase);

/** Lowered network for a permutation on log2(len) qubits. */
Circuit lower_permutation(std::span<const std::uint32_t> mapping);

/**
 * Diagonal unitary diag(exp(i*phases)) from uniformly controlled RZ layers;
 * the leftover global phase is added to global_phase.
 */
void emit_diagonal(
    std::span<const double> phases, std::span<const int> qubits,
    const GateSink &sink, double &global_phase);

struct ZigzagOptions {
  /** Keep P_r as an abstract perm gate with a declared cost of zero. */
  bool abstract_perm = false;
  /** Return the lowered transposition network instead of a perm gate. */
  bool lowered = false;
};

/** Cost of the lowered P_r network (zero when abstract). */
Cost truncated_zigzag_cost(int r, bool abstract_perm = false);

/** Six-qubit "data" circuit applying |k> -> |P_r(k)>. */
Circuit synth_truncated_zigzag(int r, const ZigzagOptions &opts = {});

/** Normalized diagonal of the inverse quantization, in row-major k. */
struct BlockEncodedDiag {
  std::array<double, 64> d{};
  std::array<double, 64> theta{};  // 2 * arccos(d_k)
  double lambda = 0;
};

BlockEncodedDiag block_encoded_diag(const jpeg::QuantTable &table);

struct InverseQuantization {
  Circuit circuit;  // registers: data (6), ancilla (1)
  double lambda = 0;
  BlockEncodedDiag diag;
};

/**
 * Block-encoded inverse quantization: a 6-control uniformly controlled RY
 * on the ancilla, |0>_a|k> -> d_k|0>_a|k> + sqrt(1-d_k^2)|1>_a|k>. Lowered
 * to 64 CX + 64 RY unless lowered is false, in which case one ucry gate
 * with the same declared cost is returned.
 */
InverseQuantization synth_inverse_quantization(
    const jpeg::QuantTable &table, bool lowered = true);

/** Cost of the lowered block encoding. */
Cost inverse_quantization_cost();

struct QdctOperator {
  std::array<double, 64> matrix{};  // orthonormal DCT-II, rows = frequency
  Cost cost_1d{18, 33, 35};
  /** Row and column transforms act on disjoint qubits. */
  Cost cost_2d() const {
    return {2 * cost_1d.cx, 2 * cost_1d.rotations, cost_1d.depth};
  }
};

QdctOperator qdct_operator();

/**
 * Six-qubit "data" circuit with two dense 8x8 inverse-DCT blocks: one on
 * the row-frequency qubits 3..5 and one on the column qubits 0..2.
 */
Circuit synth_inverse_qdct();

/**
 * Closed-form per-stage costs for an image with 2^h x 2^w padded pixels.
 * The active state-prep register has h + w - (6 - r) qubits.
 */
circuit::ResourceReport closed_form_resources(
    int h, int w, int r, Method method = Method::jqpie,
    bool abstract_perm = false);

/**
 * Expand ucry, perm and state_prep gates into ry/rz/x/cx. Dense ublock
 * gates have no decomposition here and are kept. Stage tags carry over.
 */
Circuit lower(const Circuit &c);

}  // namespace jqpie::synth
