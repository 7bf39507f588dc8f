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

#include "jqpie/synth.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace jqpie::synth {

using circuit::GateKind;

Method parse_method(std::string_view s) {
  if (s == "qpie") return Method::qpie;
  if (s == "jqpie") return Method::jqpie;
  if (s == "qf_jqpie" || s == "qf-jqpie") return Method::qf_jqpie;
  throw std::invalid_argument("unknown method: " + std::string(s));
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::qpie:
      return "qpie";
    case Method::jqpie:
      return "jqpie";
    case Method::qf_jqpie:
      return "qf_jqpie";
  }
  return "?";
}

namespace {

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

int log2_exact(std::size_t v) { return std::countr_zero(v); }

// Sink that only tracks cost.
struct CostSink {
  explicit CostSink(int n) : sched(n) {}
  void operator()(const Gate &g) {
    const Cost c = circuit::gate_cost(g);
    cost.cx += c.cx;
    cost.rotations += c.rotations;
    const auto qs = g.qubits();
    sched.add(qs, c.depth);
  }
  Cost finish() {
    cost.depth = sched.depth();
    return cost;
  }
  Cost cost;
  circuit::DepthScheduler sched;
};

}  // namespace

std::vector<double> multiplexed_angles(std::span<const double> per_control) {
  const std::size_t n = per_control.size();
  if (!is_power_of_two(n)) {
    throw std::invalid_argument("multiplexed rotation needs 2^k angles");
  }
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t gray = i ^ (i >> 1);
    double acc = 0;
    for (std::size_t c = 0; c < n; ++c) {
      acc += (std::popcount(c & gray) & 1) ? -per_control[c] : per_control[c];
    }
    out[i] = acc / double(n);
  }
  return out;
}

void emit_multiplexed_rotation(
    GateKind axis, std::span<const int> controls, int target,
    std::span<const double> per_control, const GateSink &sink) {
  const std::size_t k = controls.size();
  if (per_control.size() != (std::size_t{1} << k)) {
    throw std::invalid_argument("need 2^controls rotation angles");
  }
  auto rot = [&](double a) {
    sink(axis == GateKind::ry ? Gate::ry(target, a) : Gate::rz(target, a));
  };
  if (k == 0) {
    rot(per_control[0]);
    return;
  }
  const std::vector<double> theta = multiplexed_angles(per_control);
  const std::size_t n = theta.size();
  for (std::size_t i = 0; i < n; ++i) {
    rot(theta[i]);
    const std::size_t bit =
        i + 1 == n ? k - 1 : std::size_t(std::countr_zero(i + 1));
    sink(Gate::cx(controls[bit], target));
  }
}

void emit_state_prep(
    std::span<const double> amplitudes, std::span<const int> targets,
    const GateSink &sink) {
  const std::size_t len = amplitudes.size();
  if (!is_power_of_two(len) || len != (std::size_t{1} << targets.size())) {
    throw std::invalid_argument("amplitude count must be 2^targets");
  }
  const int m = int(targets.size());
  // norms[k][p]: norm of the amplitudes whose top k bits equal p.
  std::vector<std::vector<double>> norms(std::size_t(m) + 1);
  norms[std::size_t(m)].resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    norms[std::size_t(m)][i] = amplitudes[i] * amplitudes[i];
  }
  for (int k = m - 1; k >= 0; --k) {
    auto &cur = norms[std::size_t(k)];
    const auto &next = norms[std::size_t(k) + 1];
    cur.resize(std::size_t{1} << k);
    for (std::size_t p = 0; p < cur.size(); ++p) {
      cur[p] = next[2 * p] + next[2 * p + 1];
    }
  }
  for (int k = 0; k < m; ++k) {
    const std::size_t count = std::size_t{1} << k;
    std::vector<double> angles(count);
    for (std::size_t p = 0; p < count; ++p) {
      double a0, a1;
      if (k == m - 1) {
        a0 = amplitudes[2 * p];
        a1 = amplitudes[2 * p + 1];
      } else {
        a0 = std::sqrt(norms[std::size_t(k) + 1][2 * p]);
        a1 = std::sqrt(norms[std::size_t(k) + 1][2 * p + 1]);
      }
      angles[p] = 2.0 * std::atan2(a1, a0);
    }
    const int target = targets[std::size_t(m - 1 - k)];
    emit_multiplexed_rotation(
        GateKind::ry, targets.subspan(std::size_t(m - k), std::size_t(k)),
        target, angles, sink);
  }
}

Cost state_prep_cost(int m) {
  if (m < 0 || m > 30) throw std::invalid_argument("state-prep width out of range");
  static std::mutex mu;
  static std::map<int, Cost> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(m); it != cache.end()) return it->second;
  }
  CostSink cs(m);
  std::vector<int> targets(std::size_t(m), 0);
  std::iota(targets.begin(), targets.end(), 0);
  // Structure only: emit each layer with placeholder angles.
  for (int k = 0; k < m; ++k) {
    std::vector<double> angles(std::size_t{1} << k, 0.0);
    emit_multiplexed_rotation(
        GateKind::ry, std::span<const int>(targets).subspan(std::size_t(m - k)),
        m - 1 - k, angles, [&](Gate g) { cs(g); });
  }
  const Cost c = cs.finish();
  std::lock_guard lock(mu);
  cache[m] = c;
  return c;
}

Circuit synth_state_prep(std::span<const double> amplitudes) {
  if (!is_power_of_two(amplitudes.size())) {
    throw std::invalid_argument("amplitude count must be a power of two");
  }
  double norm2 = 0;
  for (double a : amplitudes) norm2 += a * a;
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-10) {
    throw std::invalid_argument("amplitudes are not normalized");
  }
  const int m = log2_exact(amplitudes.size());
  Circuit c = Circuit::with_qubits(m);
  std::vector<int> targets(static_cast<std::size_t>(m));
  std::iota(targets.begin(), targets.end(), 0);
  emit_state_prep(amplitudes, targets, [&](Gate g) { c.append(std::move(g)); });
  return c;
}

Gate state_prep_gate(std::vector<int> targets, std::vector<double> amplitudes) {
  const int m = int(targets.size());
  return Gate::state_prep(
      std::move(targets), std::move(amplitudes), state_prep_cost(m));
}

std::vector<std::uint32_t> truncated_zigzag_map(int r) {
  jpeg::validate_truncation(r);
  const auto &pi = jpeg::zigzag_permutation();
  const std::uint32_t kept = 1u << r;
  std::vector<std::uint32_t> map(64);
  std::iota(map.begin(), map.end(), 0u);
  std::vector<bool> is_target(64, false);
  for (std::uint32_t k = 0; k < kept; ++k) {
    map[k] = std::uint32_t(pi[k]);
    is_target[std::size_t(pi[k])] = true;
  }
  std::vector<std::uint32_t> displaced, freed;
  for (std::uint32_t v = 0; v < 64; ++v) {
    if (is_target[v] && v >= kept) displaced.push_back(v);
    if (!is_target[v] && v < kept) freed.push_back(v);
  }
  for (std::size_t i = 0; i < displaced.size(); ++i) {
    map[displaced[i]] = freed[i];
  }
  return map;
}

void emit_diagonal(
    std::span<const double> phases, std::span<const int> qubits,
    const GateSink &sink, double &global_phase) {
  const std::size_t k = qubits.size();
  if (phases.size() != (std::size_t{1} << k)) {
    throw std::invalid_argument("need 2^qubits phases");
  }
  if (k == 0) {
    global_phase += phases[0];
    return;
  }
  const std::size_t half = phases.size() / 2;
  std::vector<double> delta(half), mean(half);
  for (std::size_t c = 0; c < half; ++c) {
    delta[c] = phases[c + half] - phases[c];
    mean[c] = 0.5 * (phases[c] + phases[c + half]);
  }
  emit_multiplexed_rotation(
      GateKind::rz, qubits.first(k - 1), qubits[k - 1], delta, sink);
  emit_diagonal(mean, qubits.first(k - 1), sink, global_phase);
}

namespace {

// Swap basis states a and b of the target register, fixing all others.
void emit_transposition(
    std::uint32_t a, std::uint32_t b, std::span<const int> targets,
    const GateSink &sink, double &global_phase) {
  const std::uint32_t diff = a ^ b;
  const int t = std::countr_zero(diff);
  const bool b_t = (b >> t) & 1u;
  // V: flip the other differing bits when bit t reads b_t. V b = a ^ e_t.
  auto conjugate = [&] {
    if (!b_t) sink(Gate::x(targets[std::size_t(t)]));
    for (std::size_t d = 0; d < targets.size(); ++d) {
      if (int(d) != t && ((diff >> d) & 1u)) {
        sink(Gate::cx(targets[std::size_t(t)], targets[d]));
      }
    }
    if (!b_t) sink(Gate::x(targets[std::size_t(t)]));
  };
  conjugate();
  // Multi-controlled X on t, controlled by the others reading a's bits:
  // H_t . diag(-1 at (a with bit t set)) . H_t, with H = X . RY(pi/2).
  const int tq = targets[std::size_t(t)];
  auto hadamard = [&] {
    sink(Gate::ry(tq, std::numbers::pi / 2));
    sink(Gate::x(tq));
  };
  hadamard();
  std::vector<double> phases(std::size_t{1} << targets.size(), 0.0);
  phases[a | (1u << t)] = std::numbers::pi;
  emit_diagonal(phases, targets, sink, global_phase);
  hadamard();
  conjugate();
}

}  // namespace

void emit_permutation(
    std::span<const std::uint32_t> mapping, std::span<const int> targets,
    const GateSink &sink, double &global_phase) {
  const std::size_t dim = mapping.size();
  if (dim != (std::size_t{1} << targets.size())) {
    throw std::invalid_argument("mapping size must be 2^targets");
  }
  std::vector<bool> done(dim, false);
  for (std::uint32_t start = 0; start < dim; ++start) {
    if (done[start]) continue;
    // Cycle start -> c1 -> c2 -> ... is (start c1)(start c2)... in order.
    done[start] = true;
    for (std::uint32_t c = mapping[start]; c != start; c = mapping[c]) {
      done[c] = true;
      emit_transposition(start, c, targets, sink, global_phase);
    }
  }
}

Circuit lower_permutation(std::span<const std::uint32_t> mapping) {
  if (!is_power_of_two(mapping.size())) {
    throw std::invalid_argument("mapping size must be a power of two");
  }
  const int n = log2_exact(mapping.size());
  Circuit c = Circuit::with_qubits(n);
  std::vector<int> targets(static_cast<std::size_t>(n));
  std::iota(targets.begin(), targets.end(), 0);
  double phase = 0;
  emit_permutation(mapping, targets, [&](Gate g) { c.append(std::move(g)); }, phase);
  c.add_global_phase(phase);
  return c;
}

Cost truncated_zigzag_cost(int r, bool abstract_perm) {
  jpeg::validate_truncation(r);
  if (abstract_perm) return {};
  const auto map = truncated_zigzag_map(r);
  CostSink cs(6);
  const std::vector<int> targets = {0, 1, 2, 3, 4, 5};
  double phase = 0;
  emit_permutation(map, targets, [&](Gate g) { cs(g); }, phase);
  return cs.finish();
}

Circuit synth_truncated_zigzag(int r, const ZigzagOptions &opts) {
  auto map = truncated_zigzag_map(r);
  Circuit c({{"data", 0, 6}});
  const std::vector<int> targets = {0, 1, 2, 3, 4, 5};
  if (opts.lowered) {
    double phase = 0;
    emit_permutation(map, targets, [&](Gate g) { c.append(std::move(g)); }, phase);
    c.add_global_phase(phase);
    return c;
  }
  Gate g = Gate::perm(targets, std::move(map), truncated_zigzag_cost(r, opts.abstract_perm));
  g.label = "P_" + std::to_string(r);
  c.append(std::move(g));
  return c;
}

BlockEncodedDiag block_encoded_diag(const jpeg::QuantTable &table) {
  BlockEncodedDiag out;
  out.lambda = table.lambda();
  for (int k = 0; k < 64; ++k) {
    const double d = std::clamp(table[k] / out.lambda, 0.0, 1.0);
    out.d[std::size_t(k)] = d;
    out.theta[std::size_t(k)] = 2.0 * std::acos(d);
  }
  return out;
}

Cost inverse_quantization_cost() {
  CostSink cs(7);
  const std::vector<int> controls = {0, 1, 2, 3, 4, 5};
  const std::vector<double> angles(64, 0.0);
  emit_multiplexed_rotation(
      GateKind::ry, controls, 6, angles, [&](Gate g) { cs(g); });
  return cs.finish();
}

InverseQuantization synth_inverse_quantization(
    const jpeg::QuantTable &table, bool lowered) {
  InverseQuantization out;
  out.diag = block_encoded_diag(table);
  out.lambda = out.diag.lambda;
  out.circuit = Circuit(circuit::make_layout({{"data", 6}, {"ancilla", 1}}));
  const std::vector<int> controls = {0, 1, 2, 3, 4, 5};
  const std::vector<double> angles(out.diag.theta.begin(), out.diag.theta.end());
  if (lowered) {
    emit_multiplexed_rotation(GateKind::ry, controls, 6, angles, [&](Gate g) {
      out.circuit.append(std::move(g));
    });
  } else {
    Gate g = Gate::ucry(controls, 6, angles, inverse_quantization_cost());
    g.label = "U_Q";
    out.circuit.append(std::move(g));
  }
  return out;
}

QdctOperator qdct_operator() {
  QdctOperator op;
  op.matrix = jpeg::dct_matrix();
  return op;
}

Circuit synth_inverse_qdct() {
  const QdctOperator op = qdct_operator();
  // Inverse transform: |u> -> sum_x M[u][x] |x>, i.e. the matrix M^T.
  std::vector<std::complex<double>> inv(64);
  for (int x = 0; x < 8; ++x) {
    for (int u = 0; u < 8; ++u) {
      inv[std::size_t(8 * x + u)] = op.matrix[std::size_t(8 * u + x)];
    }
  }
  Circuit c({{"data", 0, 6}});
  c.append(Gate::ublock({3, 4, 5}, inv, op.cost_1d, "IQDCT_rows"));
  c.append(Gate::ublock({0, 1, 2}, inv, op.cost_1d, "IQDCT_cols"));
  return c;
}

circuit::ResourceReport closed_form_resources(
    int h, int w, int r, Method method, bool abstract_perm) {
  jpeg::validate_truncation(r);
  if (h < 0 || w < 0) throw std::invalid_argument("negative image exponent");
  circuit::ResourceReport rep;
  if (method == Method::qpie) {
    rep.add_stage("state_prep", state_prep_cost(h + w));
    return rep;
  }
  if (h + w < 6) throw std::invalid_argument("image must hold at least one 8x8 block");
  const int active = h + w - (6 - r);
  rep.add_stage("state_prep", state_prep_cost(active));
  rep.add_stage("inverse_zigzag", truncated_zigzag_cost(r, abstract_perm));
  if (method == Method::jqpie) {
    rep.add_stage("inverse_quantization", inverse_quantization_cost());
  }
  rep.add_stage("inverse_qdct", qdct_operator().cost_2d());
  return rep;
}

Circuit lower(const Circuit &c) {
  Circuit out(c.registers());
  out.add_global_phase(c.global_phase());
  for (const Gate &g : c.gates()) {
    auto sink = [&](Gate lg) {
      lg.stage = g.stage;
      out.append(std::move(lg));
    };
    switch (g.kind) {
      case GateKind::ucry:
        emit_multiplexed_rotation(
            GateKind::ry, g.controls, g.targets[0], *g.values, sink);
        break;
      case GateKind::perm: {
        double phase = 0;
        emit_permutation(*g.mapping, g.targets, sink, phase);
        out.add_global_phase(phase);
        break;
      }
      case GateKind::state_prep:
        emit_state_prep(*g.values, g.targets, sink);
        break;
      default:
        out.append(g);
        break;
    }
  }
  return out;
}

}  // namespace jqpie::synth
