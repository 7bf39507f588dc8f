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

#include "jqpie/statevector.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

namespace jqpie::sim {

using circuit::Gate;
using circuit::GateKind;

namespace {

int checked_width(int num_qubits) {
  if (num_qubits < 0 || num_qubits > 30) {
    throw SimError("qubit count out of range");
  }
  return num_qubits;
}

}  // namespace

StateVector::StateVector(int num_qubits)
    : n_(checked_width(num_qubits)), amps_(std::size_t{1} << n_, 0.0) {
  amps_[0] = 1.0;
}

StateVector::StateVector(int num_qubits, std::vector<amp_t> amplitudes)
    : n_(num_qubits), amps_(std::move(amplitudes)) {
  if (amps_.size() != (std::size_t{1} << num_qubits)) {
    throw SimError("amplitude count must be 2^n");
  }
}

StateVector StateVector::basis(int num_qubits, std::size_t index) {
  StateVector sv(num_qubits);
  if (index >= sv.dim()) throw SimError("basis index out of range");
  sv.amps_[0] = 0.0;
  sv.amps_[index] = 1.0;
  return sv;
}

StateVector StateVector::from_real(std::span<const double> amplitudes) {
  const std::size_t len = amplitudes.size();
  if (len == 0 || (len & (len - 1)) != 0) {
    throw SimError("amplitude count must be a power of two");
  }
  return StateVector(
      std::countr_zero(len), std::vector<amp_t>(amplitudes.begin(), amplitudes.end()));
}

double StateVector::norm() const {
  double acc = 0;
  for (const amp_t &a : amps_) acc += std::norm(a);
  return std::sqrt(acc);
}

void StateVector::normalize() {
  const double nrm = norm();
  if (nrm == 0.0) throw SimError("cannot normalize the zero vector");
  for (amp_t &a : amps_) a /= nrm;
}

Backend parse_backend(std::string_view s) {
  if (s == "gate_exact" || s == "gate-exact") return Backend::gate_exact;
  if (s == "operator" || s == "operator_level") return Backend::operator_level;
  throw std::invalid_argument("unknown backend: " + std::string(s));
}

std::string_view to_string(Backend b) {
  return b == Backend::gate_exact ? "gate_exact" : "operator";
}

namespace {

using index_t = std::size_t;

// Apply a 2x2 matrix [[a, b], [c, d]] on qubit q.
void apply_1q(StateVector &sv, int q, amp_t a, amp_t b, amp_t c, amp_t d) {
  const index_t bit = index_t{1} << q;
  auto amps = sv.amplitudes();
  for (index_t i = 0; i < amps.size(); ++i) {
    if (i & bit) continue;
    const amp_t x0 = amps[i];
    const amp_t x1 = amps[i | bit];
    amps[i] = a * x0 + b * x1;
    amps[i | bit] = c * x0 + d * x1;
  }
}

void apply_ry(StateVector &sv, int q, double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  apply_1q(sv, q, c, -s, s, c);
}

void apply_rz(StateVector &sv, int q, double theta) {
  const amp_t e0 = std::polar(1.0, -theta / 2), e1 = std::polar(1.0, theta / 2);
  apply_1q(sv, q, e0, 0.0, 0.0, e1);
}

void apply_x(StateVector &sv, int q) {
  const index_t bit = index_t{1} << q;
  auto amps = sv.amplitudes();
  for (index_t i = 0; i < amps.size(); ++i) {
    if (!(i & bit)) std::swap(amps[i], amps[i | bit]);
  }
}

void apply_cx(StateVector &sv, int control, int target) {
  const index_t cbit = index_t{1} << control, tbit = index_t{1} << target;
  auto amps = sv.amplitudes();
  for (index_t i = 0; i < amps.size(); ++i) {
    if ((i & cbit) && !(i & tbit)) std::swap(amps[i], amps[i | tbit]);
  }
}

// Local index of the target bits within a global basis index.
index_t gather(index_t i, std::span<const int> qubits) {
  index_t local = 0;
  for (std::size_t b = 0; b < qubits.size(); ++b) {
    local |= ((i >> qubits[b]) & 1u) << b;
  }
  return local;
}

index_t scatter(index_t base, index_t local, std::span<const int> qubits) {
  for (std::size_t b = 0; b < qubits.size(); ++b) {
    const index_t bit = index_t{1} << qubits[b];
    base = ((local >> b) & 1u) ? (base | bit) : (base & ~bit);
  }
  return base;
}

index_t target_mask(std::span<const int> qubits) {
  index_t mask = 0;
  for (int q : qubits) mask |= index_t{1} << q;
  return mask;
}

void apply_perm(StateVector &sv, const Gate &g) {
  const auto &map = *g.mapping;
  auto amps = sv.amplitudes();
  std::vector<amp_t> out(amps.size(), 0.0);
  for (index_t i = 0; i < amps.size(); ++i) {
    const index_t local = gather(i, g.targets);
    out[scatter(i, map[local], g.targets)] = amps[i];
  }
  std::copy(out.begin(), out.end(), amps.begin());
}

void apply_ublock(StateVector &sv, const Gate &g) {
  const auto &u = *g.matrix;
  const index_t dim = index_t{1} << g.targets.size();
  const index_t mask = target_mask(g.targets);
  auto amps = sv.amplitudes();
  std::vector<amp_t> in(dim), res(dim);
  std::vector<index_t> idx(dim);
  for (index_t base = 0; base < amps.size(); ++base) {
    if (base & mask) continue;
    for (index_t l = 0; l < dim; ++l) {
      idx[l] = scatter(base, l, g.targets);
      in[l] = amps[idx[l]];
    }
    for (index_t r = 0; r < dim; ++r) {
      amp_t acc = 0;
      for (index_t c = 0; c < dim; ++c) acc += u[r * dim + c] * in[c];
      res[r] = acc;
    }
    for (index_t l = 0; l < dim; ++l) amps[idx[l]] = res[l];
  }
}

void apply_ucry(StateVector &sv, const Gate &g) {
  const auto &angles = *g.values;
  const index_t tbit = index_t{1} << g.targets[0];
  auto amps = sv.amplitudes();
  for (index_t i = 0; i < amps.size(); ++i) {
    if (i & tbit) continue;
    const double theta = angles[gather(i, g.controls)];
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    const amp_t x0 = amps[i], x1 = amps[i | tbit];
    amps[i] = c * x0 - s * x1;
    amps[i | tbit] = s * x0 + c * x1;
  }
}

// Isometry |0..0>_targets -> sum_k a_k |k>_targets.
void apply_state_prep(StateVector &sv, const Gate &g) {
  const auto &a = *g.values;
  const index_t mask = target_mask(g.targets);
  auto amps = sv.amplitudes();
  std::vector<amp_t> out(amps.size(), 0.0);
  for (index_t i = 0; i < amps.size(); ++i) {
    if (amps[i] == amp_t(0.0)) continue;
    if (i & mask) {
      throw SimError("state_prep targets must start in |0>");
    }
    for (index_t k = 0; k < a.size(); ++k) {
      if (a[k] != 0.0) out[scatter(i, k, g.targets)] = amps[i] * a[k];
    }
  }
  std::copy(out.begin(), out.end(), amps.begin());
}

void check_qubits(const StateVector &sv, const Gate &g) {
  for (int q : g.qubits()) {
    if (q < 0 || q >= sv.num_qubits()) throw SimError("qubit out of range");
  }
}

}  // namespace

void apply_operator_block(StateVector &sv, const Gate &g) {
  check_qubits(sv, g);
  switch (g.kind) {
    case GateKind::perm:
      apply_perm(sv, g);
      return;
    case GateKind::ucry:
      apply_ucry(sv, g);
      return;
    case GateKind::ublock: {
      const auto &u = *g.matrix;
      const std::size_t dim = std::size_t{1} << g.targets.size();
      for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
          amp_t acc = 0;
          for (std::size_t k = 0; k < dim; ++k) {
            acc += u[i * dim + k] * std::conj(u[j * dim + k]);
          }
          if (std::abs(acc - (i == j ? 1.0 : 0.0)) > 1e-10) {
            throw SimError("ublock is not unitary");
          }
        }
      }
      apply_ublock(sv, g);
      return;
    }
    default:
      throw SimError(
          "not an operator block: " + std::string(circuit::to_string(g.kind)));
  }
}

void apply_gate(StateVector &sv, const Gate &g, Backend backend) {
  check_qubits(sv, g);
  switch (g.kind) {
    case GateKind::ry:
      apply_ry(sv, g.targets[0], g.angle);
      return;
    case GateKind::rz:
      apply_rz(sv, g.targets[0], g.angle);
      return;
    case GateKind::x:
      apply_x(sv, g.targets[0]);
      return;
    case GateKind::cx:
      apply_cx(sv, g.controls[0], g.targets[0]);
      return;
    case GateKind::ublock:
      apply_ublock(sv, g);
      return;
    default:
      break;
  }
  if (backend == Backend::gate_exact) {
    throw SimError(
        "unlowered " + std::string(circuit::to_string(g.kind)) +
        " gate under the gate_exact backend");
  }
  if (g.kind == GateKind::state_prep) {
    apply_state_prep(sv, g);
  } else {
    apply_operator_block(sv, g);
  }
}

StateVector apply_circuit(
    StateVector sv, const circuit::Circuit &c, Backend backend) {
  if (sv.num_qubits() != c.num_qubits()) {
    throw SimError(
        "qubit-count mismatch: state has " + std::to_string(sv.num_qubits()) +
        ", circuit has " + std::to_string(c.num_qubits()));
  }
  for (const Gate &g : c.gates()) apply_gate(sv, g, backend);
  if (c.global_phase() != 0.0) {
    const amp_t ph = std::polar(1.0, c.global_phase());
    for (amp_t &a : sv.amplitudes()) a *= ph;
  }
  return sv;
}

double branch_probability(const StateVector &sv, int qubit, int outcome) {
  if (qubit < 0 || qubit >= sv.num_qubits()) throw SimError("qubit out of range");
  if (outcome != 0 && outcome != 1) throw SimError("outcome must be 0 or 1");
  const index_t bit = index_t{1} << qubit;
  double p = 0;
  const auto amps = sv.amplitudes();
  for (index_t i = 0; i < amps.size(); ++i) {
    if (bool(i & bit) == bool(outcome)) p += std::norm(amps[i]);
  }
  return p;
}

PostSelectResult postselect(const StateVector &sv, int qubit, int outcome) {
  const double p = branch_probability(sv, qubit, outcome);
  if (p <= 0.0) throw SimError("post-selected branch has zero probability");
  const index_t bit = index_t{1} << qubit;
  std::vector<amp_t> out(sv.dim(), 0.0);
  const double inv = 1.0 / std::sqrt(p);
  const auto amps = sv.amplitudes();
  for (index_t i = 0; i < amps.size(); ++i) {
    if (bool(i & bit) == bool(outcome)) out[i] = amps[i] * inv;
  }
  return {StateVector(sv.num_qubits(), std::move(out)), p};
}

double state_fidelity(const StateVector &a, const StateVector &b) {
  if (a.dim() != b.dim()) throw SimError("dimension mismatch");
  amp_t acc = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a[i]) * b[i];
  return std::norm(acc);
}

double l2_distance(const StateVector &a, const StateVector &b) {
  if (a.dim() != b.dim()) throw SimError("dimension mismatch");
  double acc = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) acc += std::norm(a[i] - b[i]);
  return std::sqrt(acc);
}

namespace {

void put_le(std::ofstream &out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char *>(buf), 8);
}

double get_le(const unsigned char *p) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= std::uint64_t(p[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

}  // namespace

void dump_state(const StateVector &sv, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SimError("cannot write " + path.string());
  for (const amp_t &a : sv.amplitudes()) {
    put_le(out, a.real());
    put_le(out, a.imag());
  }
}

StateVector load_state_dump(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SimError("cannot read " + path.string());
  std::vector<unsigned char> raw(
      (std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (raw.size() % 16 != 0) throw SimError("truncated state dump");
  const std::size_t dim = raw.size() / 16;
  if (dim == 0 || (dim & (dim - 1)) != 0) throw SimError("state dump length is not 2^n");
  std::vector<amp_t> amps(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    amps[i] = {get_le(&raw[16 * i]), get_le(&raw[16 * i + 8])};
  }
  return StateVector(std::countr_zero(dim), std::move(amps));
}

}  // namespace jqpie::sim
