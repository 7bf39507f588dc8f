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

#include <complex>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "jqpie/circuit.hpp"

namespace jqpie::sim {

using amp_t = std::complex<double>;

class SimError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/** Dense amplitudes over n qubits; qubit 0 is the least significant bit. */
class StateVector {
 public:
  StateVector() = default;
  /** |0...0> on n qubits. */
  explicit StateVector(int num_qubits);
  StateVector(int num_qubits, std::vector<amp_t> amplitudes);
  static StateVector basis(int num_qubits, std::size_t index);
  static StateVector from_real(std::span<const double> amplitudes);

  int num_qubits() const { return n_; }
  std::size_t dim() const { return amps_.size(); }
  std::span<const amp_t> amplitudes() const { return amps_; }
  std::span<amp_t> amplitudes() { return amps_; }
  const amp_t &operator[](std::size_t i) const { return amps_[i]; }
  amp_t &operator[](std::size_t i) { return amps_[i]; }

  double norm() const;
  void normalize();

 private:
  int n_ = 0;
  std::vector<amp_t> amps_;
};

enum class Backend {
  /// Applies only ry/rz/x/cx plus opaque dense ublock gates.
  gate_exact,
  /// Applies composite gates (perm, ucry, ublock, state_prep) directly.
  operator_level,
};

Backend parse_backend(std::string_view s);
std::string_view to_string(Backend b);

void apply_gate(StateVector &sv, const circuit::Gate &g, Backend backend);

/**
 * Apply a permutation, dense block or uniformly controlled rotation
 * (the diagonal block encoding) on its targets, identity elsewhere. A
 * ublock further than 1e-10 from unitary is rejected.
 */
void apply_operator_block(StateVector &sv, const circuit::Gate &g);

StateVector apply_circuit(
    StateVector sv, const circuit::Circuit &c, Backend backend);

struct PostSelectResult {
  StateVector state;   // renormalized branch
  double probability;  // squared norm of the branch before renormalizing
};

/** Project qubit onto outcome; throws SimError on a zero-probability branch. */
PostSelectResult postselect(const StateVector &sv, int qubit, int outcome);

/** Squared norm of the branch where qubit reads outcome. */
double branch_probability(const StateVector &sv, int qubit, int outcome);

/** |<a|b>|^2. */
double state_fidelity(const StateVector &a, const StateVector &b);

/** Euclidean distance between amplitude vectors. */
double l2_distance(const StateVector &a, const StateVector &b);

/** Raw dump: little-endian f64 pairs (re, im), 2^(n+1) values. */
void dump_state(const StateVector &sv, const std::filesystem::path &path);
StateVector load_state_dump(const std::filesystem::path &path);

}  // namespace jqpie::sim
