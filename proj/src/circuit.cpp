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

#include "jqpie/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <regex>
#include <sstream>

namespace jqpie::circuit {

std::string_view to_string(GateKind k) {
  switch (k) {
    case GateKind::ry:
      return "ry";
    case GateKind::rz:
      return "rz";
    case GateKind::x:
      return "x";
    case GateKind::cx:
      return "cx";
    case GateKind::ucry:
      return "ucry";
    case GateKind::perm:
      return "perm";
    case GateKind::ublock:
      return "ublock";
    case GateKind::state_prep:
      return "state_prep";
  }
  return "?";
}

Gate Gate::ry(int qubit, double angle) {
  Gate g;
  g.kind = GateKind::ry;
  g.targets = {qubit};
  g.angle = angle;
  return g;
}

Gate Gate::rz(int qubit, double angle) {
  Gate g;
  g.kind = GateKind::rz;
  g.targets = {qubit};
  g.angle = angle;
  return g;
}

Gate Gate::x(int qubit) {
  Gate g;
  g.kind = GateKind::x;
  g.targets = {qubit};
  return g;
}

Gate Gate::cx(int control, int target) {
  Gate g;
  g.kind = GateKind::cx;
  g.controls = {control};
  g.targets = {target};
  return g;
}

Gate Gate::ucry(
    std::vector<int> controls, int target, std::vector<double> angles,
    std::optional<Cost> cost) {
  if (angles.size() != (std::size_t{1} << controls.size())) {
    throw CircuitError("ucry needs 2^controls angles");
  }
  Gate g;
  g.kind = GateKind::ucry;
  g.controls = std::move(controls);
  g.targets = {target};
  g.values = std::make_shared<const std::vector<double>>(std::move(angles));
  g.cost = cost;
  return g;
}

Gate Gate::perm(
    std::vector<int> targets, std::vector<std::uint32_t> mapping,
    std::optional<Cost> cost) {
  const std::size_t dim = std::size_t{1} << targets.size();
  if (mapping.size() != dim) throw CircuitError("perm needs 2^targets entries");
  std::vector<bool> seen(dim, false);
  for (std::uint32_t m : mapping) {
    if (m >= dim || seen[m]) throw CircuitError("perm map is not a bijection");
    seen[m] = true;
  }
  Gate g;
  g.kind = GateKind::perm;
  g.targets = std::move(targets);
  g.mapping =
      std::make_shared<const std::vector<std::uint32_t>>(std::move(mapping));
  g.cost = cost;
  return g;
}

Gate Gate::ublock(
    std::vector<int> targets, std::vector<std::complex<double>> matrix,
    std::optional<Cost> cost, std::string label) {
  const std::size_t dim = std::size_t{1} << targets.size();
  if (matrix.size() != dim * dim) {
    throw CircuitError("ublock needs a 2^t x 2^t matrix");
  }
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      std::complex<double> acc = 0;
      for (std::size_t k = 0; k < dim; ++k) {
        acc += matrix[i * dim + k] * std::conj(matrix[j * dim + k]);
      }
      if (std::abs(acc - (i == j ? 1.0 : 0.0)) > 1e-12) {
        throw CircuitError("ublock matrix is not unitary");
      }
    }
  }
  Gate g;
  g.kind = GateKind::ublock;
  g.targets = std::move(targets);
  g.matrix = std::make_shared<const std::vector<std::complex<double>>>(
      std::move(matrix));
  g.cost = cost;
  g.label = std::move(label);
  return g;
}

Gate Gate::state_prep(
    std::vector<int> targets, std::vector<double> amplitudes,
    std::optional<Cost> cost) {
  if (amplitudes.size() != (std::size_t{1} << targets.size())) {
    throw CircuitError("state_prep needs 2^targets amplitudes");
  }
  double norm2 = 0;
  for (double a : amplitudes) norm2 += a * a;
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-10) {
    throw CircuitError("state_prep amplitudes are not normalized");
  }
  Gate g;
  g.kind = GateKind::state_prep;
  g.targets = std::move(targets);
  g.values = std::make_shared<const std::vector<double>>(std::move(amplitudes));
  g.cost = cost;
  return g;
}

bool Gate::is_primitive() const {
  return kind == GateKind::ry || kind == GateKind::rz || kind == GateKind::x ||
         kind == GateKind::cx;
}

std::vector<int> Gate::qubits() const {
  std::vector<int> q = controls;
  q.insert(q.end(), targets.begin(), targets.end());
  return q;
}

std::vector<Register> make_layout(
    const std::vector<std::pair<std::string, int>> &sizes) {
  std::vector<Register> regs;
  int offset = 0;
  for (const auto &[name, size] : sizes) {
    regs.push_back({name, offset, size});
    offset += size;
  }
  return regs;
}

Circuit::Circuit(std::vector<Register> registers)
    : registers_(std::move(registers)) {
  for (const Register &r : registers_) {
    if (r.size < 0 || r.offset != num_qubits_) {
      throw CircuitError("registers must tile the qubit range contiguously");
    }
    num_qubits_ += r.size;
  }
}

Circuit Circuit::with_qubits(int n) { return Circuit({{"q", 0, n}}); }

const Register &Circuit::reg(std::string_view name) const {
  for (const Register &r : registers_) {
    if (r.name == name) return r;
  }
  throw CircuitError("no register named " + std::string(name));
}

bool Circuit::has_register(std::string_view name) const {
  return std::any_of(registers_.begin(), registers_.end(), [&](const auto &r) {
    return r.name == name;
  });
}

Circuit &Circuit::append(Gate g) {
  const std::vector<int> qs = g.qubits();
  if (g.targets.empty()) throw CircuitError("gate without targets");
  for (int q : qs) {
    if (q < 0 || q >= num_qubits_) {
      throw CircuitError("qubit index out of range: " + std::to_string(q));
    }
  }
  std::vector<int> sorted = qs;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw CircuitError("gate operands must be distinct qubits");
  }
  if (g.kind == GateKind::cx && (g.controls.size() != 1 || g.targets.size() != 1)) {
    throw CircuitError("cx takes one control and one target");
  }
  gates_.push_back(std::move(g));
  return *this;
}

Circuit Circuit::with_stage(const std::string &stage) const {
  Circuit out = *this;
  for (Gate &g : out.gates_) g.stage = stage;
  return out;
}

bool Circuit::is_lowered() const {
  return std::all_of(gates_.begin(), gates_.end(), [](const Gate &g) {
    return g.is_primitive();
  });
}

Circuit compose(const Circuit &a, const Circuit &b) {
  if (a.registers() != b.registers()) {
    throw CircuitError("cannot compose circuits with different registers");
  }
  Circuit out = a;
  for (const Gate &g : b.gates()) out.append(g);
  out.add_global_phase(b.global_phase());
  return out;
}

Circuit embed(
    const Circuit &inner, std::vector<Register> outer,
    std::span<const int> qubit_map) {
  if (qubit_map.size() != std::size_t(inner.num_qubits())) {
    throw CircuitError("qubit map must cover every inner qubit");
  }
  Circuit out(std::move(outer));
  for (Gate g : inner.gates()) {
    for (int &q : g.controls) q = qubit_map[std::size_t(q)];
    for (int &q : g.targets) q = qubit_map[std::size_t(q)];
    out.append(std::move(g));
  }
  out.add_global_phase(inner.global_phase());
  return out;
}

DepthScheduler::DepthScheduler(int num_qubits)
    : free_at_(std::size_t(num_qubits), 0) {}

void DepthScheduler::add(std::span<const int> qubits, std::int64_t steps) {
  if (steps <= 0) return;
  std::int64_t start = 0;
  for (int q : qubits) start = std::max(start, free_at_[std::size_t(q)]);
  const std::int64_t end = start + steps;
  for (int q : qubits) free_at_[std::size_t(q)] = end;
  depth_ = std::max(depth_, end);
}

Cost gate_cost(const Gate &g) {
  switch (g.kind) {
    case GateKind::ry:
    case GateKind::rz:
      return {0, 1, 1};
    case GateKind::x:
      return {0, 0, 1};
    case GateKind::cx:
      return {1, 0, 1};
    default:
      break;
  }
  if (!g.cost) {
    throw CircuitError(
        std::string(to_string(g.kind)) + " gate carries no cost model");
  }
  return *g.cost;
}

const Cost *ResourceReport::stage(std::string_view name) const {
  for (const StageCost &s : breakdown) {
    if (s.stage == name) return &s.cost;
  }
  return nullptr;
}

void ResourceReport::add_stage(std::string name, const Cost &c) {
  cx_count += c.cx;
  rotation_count += c.rotations;
  depth += c.depth;
  breakdown.push_back({std::move(name), c});
}

ResourceReport resource_counts(const Circuit &c) {
  std::vector<std::string> order;
  std::map<std::string, std::pair<Cost, DepthScheduler>> acc;
  for (const Gate &g : c.gates()) {
    const std::string name = g.stage.empty() ? "circuit" : g.stage;
    auto it = acc.find(name);
    if (it == acc.end()) {
      order.push_back(name);
      it = acc.emplace(name, std::make_pair(Cost{}, DepthScheduler(c.num_qubits())))
               .first;
    }
    const Cost gc = gate_cost(g);
    it->second.first.cx += gc.cx;
    it->second.first.rotations += gc.rotations;
    const std::vector<int> qs = g.qubits();
    it->second.second.add(qs, gc.depth);
  }
  ResourceReport report;
  for (const std::string &name : order) {
    auto &[cost, sched] = acc.at(name);
    cost.depth = sched.depth();
    report.add_stage(name, cost);
  }
  return report;
}

void to_json(nlohmann::json &j, const Cost &c) {
  j = nlohmann::json{
      {"cx_count", c.cx}, {"rotation_count", c.rotations}, {"depth", c.depth}};
}

void to_json(nlohmann::json &j, const ResourceReport &r) {
  nlohmann::json stages = nlohmann::json::object();
  for (const StageCost &s : r.breakdown) stages[s.stage] = s.cost;
  j = nlohmann::json{
      {"cx_count", r.cx_count},
      {"rotation_count", r.rotation_count},
      {"depth", r.depth},
      {"breakdown", stages}};
}

namespace {

std::string fmt_angle(double a) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", a);
  return buf;
}

}  // namespace

std::string export_qasm(const Circuit &c) {
  if (!c.is_lowered()) {
    throw CircuitError("lower before export: circuit holds composite gates");
  }
  std::ostringstream out;
  out << "OPENQASM 3.0;\ninclude \"stdgates.inc\";\n";
  out << "qubit[" << c.num_qubits() << "] q;\n";
  if (c.global_phase() != 0.0) {
    out << "gphase(" << fmt_angle(c.global_phase()) << ");\n";
  }
  for (const Gate &g : c.gates()) {
    switch (g.kind) {
      case GateKind::ry:
      case GateKind::rz:
        out << to_string(g.kind) << "(" << fmt_angle(g.angle) << ") q["
            << g.targets[0] << "];\n";
        break;
      case GateKind::x:
        out << "x q[" << g.targets[0] << "];\n";
        break;
      case GateKind::cx:
        out << "cx q[" << g.controls[0] << "], q[" << g.targets[0] << "];\n";
        break;
      default:
        break;
    }
  }
  return out.str();
}

Circuit parse_qasm(std::string_view text) {
  static const std::regex qubits_re(R"(^qubit\[(\d+)\]\s+q;$)");
  static const std::regex rot_re(
      R"(^(ry|rz)\(([^)]+)\)\s+q\[(\d+)\];$)");
  static const std::regex x_re(R"(^x\s+q\[(\d+)\];$)");
  static const std::regex cx_re(R"(^cx\s+q\[(\d+)\],\s*q\[(\d+)\];$)");
  static const std::regex phase_re(R"(^gphase\(([^)]+)\);$)");

  std::optional<Circuit> circ;
  double phase = 0.0;
  std::istringstream in{std::string(text)};
  std::string line;
  std::smatch m;
  auto need = [&]() -> Circuit & {
    if (!circ) throw CircuitError("gate before qubit declaration");
    return *circ;
  };
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    if (line.starts_with("//") || line.starts_with("OPENQASM") ||
        line.starts_with("include")) {
      continue;
    }
    if (std::regex_match(line, m, qubits_re)) {
      circ = Circuit::with_qubits(std::stoi(m[1]));
    } else if (std::regex_match(line, m, rot_re)) {
      const double a = std::stod(m[2]);
      const int q = std::stoi(m[3]);
      need().append(m[1] == "ry" ? Gate::ry(q, a) : Gate::rz(q, a));
    } else if (std::regex_match(line, m, x_re)) {
      need().append(Gate::x(std::stoi(m[1])));
    } else if (std::regex_match(line, m, cx_re)) {
      need().append(Gate::cx(std::stoi(m[1]), std::stoi(m[2])));
    } else if (std::regex_match(line, m, phase_re)) {
      phase += std::stod(m[1]);
    } else {
      throw CircuitError("unrecognized QASM statement: " + line);
    }
  }
  if (!circ) circ = Circuit::with_qubits(0);
  circ->add_global_phase(phase);
  return *circ;
}

}  // namespace jqpie::circuit
