/**
 * This code is part of causalframes.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "cframes/zoo.hpp"

#include <sstream>

#include "cframes/random.hpp"

namespace cframes {

namespace {

const Matrix &pauli_x() {
  static const Matrix x = (Matrix(2, 2) << 0, 1, 1, 0).finished();
  return x;
}

Matrix identity(std::size_t d) { return Matrix::Identity(d, d); }

GatePayload fixed(Matrix m) {
  return [m](const std::vector<Matrix> &) { return m; };
}

GatePayload party_gate(std::size_t k) {
  return [k](const std::vector<Matrix> &u) { return u.at(k); };
}

// U X U^dag, or U^dag X U when `dagger_first`.
GatePayload conjugated_x(std::size_t k, bool dagger_first) {
  return [k, dagger_first](const std::vector<Matrix> &u) -> Matrix {
    const Matrix &v = u.at(k);
    return dagger_first ? Matrix(v.adjoint() * pauli_x() * v) : Matrix(v * pauli_x() * v.adjoint());
  };
}

} // namespace

CircuitOracle::CircuitOracle(std::vector<std::size_t> wire_dims, std::vector<Gate> gates)
    : dims_(std::move(wire_dims)), gates_(std::move(gates)) {
  for (auto d : dims_)
    total_ *= d;
  for (const auto &g : gates_) {
    for (auto t : g.targets)
      if (t >= dims_.size())
        throw LayoutError("gate '" + g.name + "' targets a missing wire");
    for (const auto &c : g.controls)
      if (c.first >= dims_.size() || c.second >= dims_[c.first])
        throw LayoutError("gate '" + g.name + "' has an invalid control");
  }
}

std::string CircuitOracle::description() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < gates_.size(); ++i) {
    const auto &g = gates_[i];
    os << (i ? "; " : "") << g.name << " on";
    for (auto t : g.targets)
      os << " q" << t;
    for (const auto &[w, v] : g.controls)
      os << " if q" << w << "=" << v;
  }
  return os.str();
}

Matrix CircuitOracle::gate_matrix(const Gate &g, const std::vector<Matrix> &unitaries) const {
  Matrix local = g.payload(unitaries);
  const std::size_t n = dims_.size();
  std::vector<std::size_t> stride(n, 1);
  for (std::size_t k = n; k-- > 1;)
    stride[k - 1] = stride[k] * dims_[k];
  std::size_t tdim = 1;
  for (auto t : g.targets)
    tdim *= dims_[t];
  if (static_cast<std::size_t>(local.rows()) != tdim || local.rows() != local.cols())
    throw LayoutError("gate '" + g.name + "' payload has the wrong shape");
  Matrix out = Matrix::Zero(total_, total_);
  for (std::size_t s = 0; s < total_; ++s) {
    std::vector<std::size_t> digit(n);
    for (std::size_t k = 0; k < n; ++k)
      digit[k] = (s / stride[k]) % dims_[k];
    bool active = true;
    for (const auto &[w, v] : g.controls)
      active = active && digit[w] == v;
    if (!active) {
      out(s, s) = 1.0;
      continue;
    }
    std::size_t in = 0, base = s;
    for (auto t : g.targets) {
      in = in * dims_[t] + digit[t];
      base -= digit[t] * stride[t];
    }
    for (std::size_t o = 0; o < tdim; ++o) {
      std::size_t idx = base, rem = o;
      for (std::size_t j = g.targets.size(); j-- > 0;) {
        idx += (rem % dims_[g.targets[j]]) * stride[g.targets[j]];
        rem /= dims_[g.targets[j]];
      }
      out(idx, s) += local(o, in);
    }
  }
  return out;
}

Matrix CircuitOracle::evaluate(const std::vector<Matrix> &unitaries) const {
  Matrix out = identity(total_);
  for (const auto &g : gates_)
    out = gate_matrix(g, unitaries) * out;
  return out;
}

std::pair<Matrix, Matrix> CircuitOracle::frame(std::size_t party,
                                               const std::vector<Matrix> &unitaries) const {
  std::size_t pos = gates_.size();
  for (std::size_t i = 0; i < gates_.size(); ++i)
    if (gates_[i].party == static_cast<int>(party)) {
      if (pos != gates_.size())
        throw LayoutError("party gate appears more than once");
      pos = i;
    }
  if (pos == gates_.size())
    throw LayoutError("circuit has no bare gate for the party");
  Matrix pi = identity(total_), phi = identity(total_);
  for (std::size_t i = 0; i < pos; ++i)
    pi = gate_matrix(gates_[i], unitaries) * pi;
  for (std::size_t i = pos + 1; i < gates_.size(); ++i)
    phi = gate_matrix(gates_[i], unitaries) * phi;
  // Wire order with the party's wire first.
  const std::size_t wire = gates_[pos].targets.at(0);
  std::vector<Factor> f;
  std::vector<std::string> order{"q" + std::to_string(wire)};
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    f.push_back({"q" + std::to_string(k), dims_[k]});
    if (k != wire)
      order.push_back("q" + std::to_string(k));
  }
  SpaceLayout l(f);
  auto map = permutation_map(l, order);
  Matrix s = Matrix::Zero(total_, total_);
  for (std::size_t n = 0; n < map.size(); ++n)
    s(n, map[n]) = 1.0;
  return {s * pi, phi * s.adjoint()};
}

Matrix switch_map(const Matrix &u_a, const Matrix &u_b) {
  const std::size_t d = u_a.rows();
  Matrix out = Matrix::Zero(2 * d, 2 * d);
  out.topLeftCorner(d, d) = u_b * u_a;
  out.bottomRightCorner(d, d) = u_a * u_b;
  return out;
}

SwitchZoo quantum_switch() {
  SwitchZoo z;
  z.w = reconstruct_process([](const std::vector<Matrix> &u) { return switch_map(u[0], u[1]); },
                            {{"A", 2, 2}, {"B", 2, 2}}, 4);
  // Wire 0 is the control, wire 1 the target.
  z.frame_a = CircuitOracle({2, 2}, {{"U_B", {1}, {{0, 1}}, party_gate(1), -1},
                                     {"U_A", {1}, {}, party_gate(0), 0},
                                     {"U_B", {1}, {{0, 0}}, party_gate(1), -1}});
  z.frame_b = CircuitOracle({2, 2}, {{"U_A", {1}, {{0, 0}}, party_gate(0), -1},
                                     {"U_B", {1}, {}, party_gate(1), 1},
                                     {"U_A", {1}, {{0, 1}}, party_gate(0), -1}});
  return z;
}

ProcessVector causal_chain(const std::vector<Matrix> &v, std::size_t d) {
  if (v.size() < 2)
    throw LayoutError("causal_chain needs at least two fixed unitaries");
  const std::size_t n = v[0].rows();
  for (const auto &m : v)
    if (static_cast<std::size_t>(m.rows()) != n || m.rows() != m.cols())
      throw LayoutError("causal_chain: unitaries must share one square shape");
  if (n % d != 0)
    throw LayoutError("causal_chain: party dimension does not divide the register");
  const std::size_t mem = n / d;
  std::vector<PartyDims> parties;
  for (std::size_t k = 0; k + 1 < v.size(); ++k)
    parties.push_back({std::string(1, static_cast<char>('A' + k)), d, d});
  auto oracle = [v, mem](const std::vector<Matrix> &u) {
    Matrix g = v[0];
    for (std::size_t k = 0; k < u.size(); ++k)
      g = v[k + 1] * kron(u[k], identity(mem)) * g;
    return g;
  };
  return reconstruct_process(oracle, parties, n);
}

std::array<int, 3> f_bw(int a, int b, int c) {
  return {(b == 0 && c == 1) ? 1 : 0, (a == 1 && c == 0) ? 1 : 0, (a == 0 && b == 1) ? 1 : 0};
}

namespace {

int f_bw_word(int x) {
  auto r = f_bw((x >> 2) & 1, (x >> 1) & 1, x & 1);
  return (r[0] << 2) | (r[1] << 1) | r[2];
}

// Layout P, F, A_I, A_O, B_I, B_O, C_I, C_O; index from 3-bit words.
std::size_t bw_index(int p, int f, int in, int out) {
  std::size_t idx = static_cast<std::size_t>(p) * 8 + static_cast<std::size_t>(f);
  for (int k = 2; k >= 0; --k)
    idx = idx * 4 + static_cast<std::size_t>(((in >> k) & 1) * 2 + ((out >> k) & 1));
  return idx;
}

ProcessLayout bw_layout() {
  return ProcessLayout::standard(8, 8, {{"A", 2, 2}, {"B", 2, 2}, {"C", 2, 2}});
}

} // namespace

ProcessVector bw_process() {
  Vector w = Vector::Zero(4096);
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y)
      w[static_cast<Eigen::Index>(bw_index(y, x, y ^ f_bw_word(x), x))] += 1.0;
  return {bw_layout(), w};
}

ProcessVector bw_reverse() {
  Vector w = Vector::Zero(4096);
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y)
      w[static_cast<Eigen::Index>(bw_index(x, y, x, y ^ f_bw_word(x)))] += 1.0;
  return {bw_layout(), w};
}

CircuitOracle circuit_swiss() {
  return CircuitOracle(
      {2, 2, 2},
      {{"U_B", {1}, {}, party_gate(1), -1},
       {"U_C", {2}, {}, party_gate(2), -1},
       {"X", {0}, {{1, 0}, {2, 1}}, fixed(pauli_x()), -1},
       {"U_A", {0}, {}, party_gate(0), 0},
       {"U_B X U_B^dag", {1}, {{0, 1}, {2, 0}}, conjugated_x(1, false), -1},
       {"U_C X U_C^dag", {2}, {{0, 0}, {1, 1}}, conjugated_x(2, false), -1}});
}

CircuitOracle circuit_rev_swiss() {
  return CircuitOracle(
      {2, 2, 2},
      {{"U_C^dag X U_C", {2}, {{0, 0}, {1, 1}}, conjugated_x(2, true), -1},
       {"U_B^dag X U_B", {1}, {{0, 1}, {2, 0}}, conjugated_x(1, true), -1},
       {"U_A", {0}, {}, party_gate(0), 0},
       {"X", {0}, {{1, 0}, {2, 1}}, fixed(pauli_x()), -1},
       {"U_B", {1}, {}, party_gate(1), -1},
       {"U_C", {2}, {}, party_gate(2), -1}});
}

LabeledOperator ctc_simulate(const LoopCircuit &c, const std::vector<Matrix> &unitaries) {
  const std::size_t n = c.wires.total_dim();
  Matrix t = identity(n);
  for (const auto &stage : c.stages) {
    Matrix s = stage(unitaries);
    if (static_cast<std::size_t>(s.rows()) != n || s.rows() != s.cols())
      throw LayoutError("loop circuit stage has the wrong shape");
    t = s * t;
  }
  std::vector<std::string> sinks, sources;
  for (const auto &l : c.loops) {
    if (!c.wires.contains(l.sink) || !c.wires.contains(l.source))
      throw LayoutError("dangling loop wire '" + (c.wires.contains(l.sink) ? l.source : l.sink) + "'");
    if (c.wires.dim_of(l.sink) != c.wires.dim_of(l.source))
      throw LayoutError("loop wires differ in dimension");
    sinks.push_back(l.sink);
    sources.push_back(l.source);
  }
  auto free_in = c.wires.without(sources).labels();
  auto free_out = c.wires.without(sinks).labels();
  auto in_order = free_in, out_order = free_out;
  in_order.insert(in_order.end(), sources.begin(), sources.end());
  out_order.insert(out_order.end(), sinks.begin(), sinks.end());
  auto p = permute(LabeledOperator{c.wires, c.wires, t}, in_order, out_order);
  const Eigen::Index loop_dim = static_cast<Eigen::Index>(c.wires.select(sources).total_dim());
  const Eigen::Index ri = p.data.cols() / loop_dim, ro = p.data.rows() / loop_dim;
  Matrix out = Matrix::Zero(ro, ri);
  for (Eigen::Index k = 0; k < loop_dim; ++k)
    for (Eigen::Index col = 0; col < ri; ++col)
      for (Eigen::Index row = 0; row < ro; ++row)
        out(row, col) += p.data(row * loop_dim + k, col * loop_dim + k);
  return {c.wires.select(free_in), c.wires.select(free_out), out};
}

double ctc_success_probability(const LoopCircuit &c, const std::vector<Matrix> &unitaries,
                               const Matrix &rho_in) {
  auto e = ctc_simulate(c, unitaries);
  double scale = 1.0;
  for (const auto &l : c.loops)
    scale *= static_cast<double>(c.wires.dim_of(l.sink));
  Matrix branch = e.data / scale;
  return (branch * rho_in * branch.adjoint()).trace().real();
}

LoopCircuit rev_swiss_ctc() {
  // s0..s2 carry the past into the parties; l0..l2 arrive from the parties'
  // outputs through the loops and leave as the future.
  LoopCircuit c;
  c.wires = SpaceLayout({{"s0", 2}, {"s1", 2}, {"s2", 2}, {"l0", 2}, {"l1", 2}, {"l2", 2}});
  CircuitOracle copy({2, 2, 2, 2, 2, 2},
                     {{"X", {3}, {{1, 0}, {2, 1}}, fixed(pauli_x()), -1},
                      {"X", {4}, {{0, 1}, {2, 0}}, fixed(pauli_x()), -1},
                      {"X", {5}, {{0, 0}, {1, 1}}, fixed(pauli_x()), -1}});
  CircuitOracle parties({2, 2, 2, 2, 2, 2}, {{"U_A", {0}, {}, party_gate(0), 0},
                                             {"U_B", {1}, {}, party_gate(1), 1},
                                             {"U_C", {2}, {}, party_gate(2), 2}});
  c.stages.push_back([copy](const std::vector<Matrix> &u) { return copy.evaluate(u); });
  c.stages.push_back([parties](const std::vector<Matrix> &u) { return parties.evaluate(u); });
  c.loops = {{"s0", "l0"}, {"s1", "l1"}, {"s2", "l2"}};
  return c;
}

std::vector<std::string> zoo_names() {
  return {"switch", "bw", "bw-reverse", "causal-chain", "identity"};
}

ProcessVector zoo_process(const std::string &name) {
  if (name == "switch")
    return quantum_switch().w;
  if (name == "bw")
    return bw_process();
  if (name == "bw-reverse")
    return bw_reverse();
  if (name == "causal-chain") {
    Rng rng(2024);
    return causal_chain({haar_unitary(4, rng), haar_unitary(4, rng), haar_unitary(4, rng)}, 2);
  }
  if (name == "identity")
    return reconstruct_process([](const std::vector<Matrix> &u) { return u[0]; }, {{"A", 2, 2}}, 2);
  throw InvalidInput("unknown zoo process '" + name + "'");
}

} // namespace cframes
