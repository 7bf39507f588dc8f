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
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

/**
 * Gate-level circuit representation.
 *
 * Basis convention used across the project: qubit 0 is the least
 * significant bit of a basis index. Pipeline circuits lay registers out as
 * data (qubits 0..5), then index, then the ancilla as the most significant
 * qubit. Inside the data register the low three qubits address the column
 * frequency v (or pixel column y) and the high three the row u (or x).
 */
namespace jqpie::circuit {

class CircuitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class GateKind {
  ry,
  rz,
  x,
  cx,
  /// Uniformly controlled RY: angle values[c] applied when controls read c.
  ucry,
  /// Basis permutation |i> -> |mapping[i]> on the target subspace.
  perm,
  /// Dense unitary on the target subspace, row-major.
  ublock,
  /// Load real amplitudes onto targets that are all |0>.
  state_prep,
};

std::string_view to_string(GateKind k);

struct Cost {
  std::int64_t cx = 0;
  std::int64_t rotations = 0;
  std::int64_t depth = 0;

  Cost &operator+=(const Cost &o) {
    cx += o.cx;
    rotations += o.rotations;
    depth += o.depth;
    return *this;
  }
  friend bool operator==(const Cost &, const Cost &) = default;
};

/**
 * One circuit operation. For multi-qubit payloads, targets[b] carries bit b
 * of the local basis index. Composite kinds (ucry, perm, ublock,
 * state_prep) carry a declared cost which resource accounting uses in place
 * of scheduling.
 */
struct Gate {
  GateKind kind = GateKind::x;
  std::vector<int> targets;
  std::vector<int> controls;
  double angle = 0.0;
  std::shared_ptr<const std::vector<double>> values;
  std::shared_ptr<const std::vector<std::uint32_t>> mapping;
  std::shared_ptr<const std::vector<std::complex<double>>> matrix;
  std::optional<Cost> cost;
  std::string label;
  std::string stage;

  static Gate ry(int qubit, double angle);
  static Gate rz(int qubit, double angle);
  static Gate x(int qubit);
  static Gate cx(int control, int target);
  static Gate ucry(
      std::vector<int> controls, int target, std::vector<double> angles,
      std::optional<Cost> cost = std::nullopt);
  static Gate perm(
      std::vector<int> targets, std::vector<std::uint32_t> mapping,
      std::optional<Cost> cost = std::nullopt);
  static Gate ublock(
      std::vector<int> targets, std::vector<std::complex<double>> matrix,
      std::optional<Cost> cost = std::nullopt, std::string label = {});
  static Gate state_prep(
      std::vector<int> targets, std::vector<double> amplitudes,
      std::optional<Cost> cost = std::nullopt);

  bool is_primitive() const;
  /** Controls followed by targets. */
  std::vector<int> qubits() const;
};

struct Register {
  std::string name;
  int offset = 0;
  int size = 0;
  friend bool operator==(const Register &, const Register &) = default;
};

/** Registers given in order tile qubits 0..n-1 contiguously. */
std::vector<Register> make_layout(
    const std::vector<std::pair<std::string, int>> &sizes);

class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(std::vector<Register> registers);
  /** Single register named "q". */
  static Circuit with_qubits(int n);

  int num_qubits() const { return num_qubits_; }
  const std::vector<Register> &registers() const { return registers_; }
  const Register &reg(std::string_view name) const;
  bool has_register(std::string_view name) const;
  const std::vector<Gate> &gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }
  bool empty() const { return gates_.empty(); }
  double global_phase() const { return global_phase_; }
  void add_global_phase(double phase) { global_phase_ += phase; }

  /** Validates operands and payload invariants before appending. */
  Circuit &append(Gate g);
  /** Copy with every gate tagged as belonging to the named stage. */
  Circuit with_stage(const std::string &stage) const;
  /** True when only ry/rz/x/cx gates are present. */
  bool is_lowered() const;

 private:
  std::vector<Register> registers_;
  int num_qubits_ = 0;
  std::vector<Gate> gates_;
  double global_phase_ = 0.0;
};

/** a followed by b; both must share one register layout. */
Circuit compose(const Circuit &a, const Circuit &b);

/**
 * Re-home every gate of inner onto an outer layout. qubit_map[i] is the
 * outer qubit playing inner qubit i.
 */
Circuit embed(
    const Circuit &inner, std::vector<Register> outer,
    std::span<const int> qubit_map);

/**
 * ASAP depth tracking: each operation starts once all of its qubits are
 * free and occupies them for the given number of steps.
 */
class DepthScheduler {
 public:
  explicit DepthScheduler(int num_qubits);
  void add(std::span<const int> qubits, std::int64_t steps = 1);
  std::int64_t depth() const { return depth_; }

 private:
  std::vector<std::int64_t> free_at_;
  std::int64_t depth_ = 0;
};

/** Cost of one gate: primitives count themselves, composites are declared. */
Cost gate_cost(const Gate &g);

struct StageCost {
  std::string stage;
  Cost cost;
  friend bool operator==(const StageCost &, const StageCost &) = default;
};

struct ResourceReport {
  std::int64_t cx_count = 0;
  std::int64_t rotation_count = 0;
  std::int64_t depth = 0;
  std::vector<StageCost> breakdown;

  const Cost *stage(std::string_view name) const;
  Cost total() const { return {cx_count, rotation_count, depth}; }
  /** Append a stage and fold it into the totals. */
  void add_stage(std::string name, const Cost &c);
};

/**
 * Exact counts for a circuit. Gates are grouped by stage tag in order of
 * first appearance (untagged gates form a stage named "circuit"); each
 * stage is scheduled on its own and stage depths add, so totals are the
 * sums of the breakdown.
 */
ResourceReport resource_counts(const Circuit &c);

void to_json(nlohmann::json &j, const Cost &c);
void to_json(nlohmann::json &j, const ResourceReport &r);

/** OpenQASM 3 text. Throws CircuitError unless the circuit is lowered. */
std::string export_qasm(const Circuit &c);
/** Parse the subset export_qasm emits. */
Circuit parse_qasm(std::string_view text);

}  // namespace jqpie::circuit
