/**
 * This code is part of causalframes.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef CFRAMES_ZOO_HPP
#define CFRAMES_ZOO_HPP

#include <array>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "cframes/process.hpp"

namespace cframes {

using GatePayload = std::function<Matrix(const std::vector<Matrix> &)>;

struct Gate {
  std::string name;
  std::vector<std::size_t> targets;
  std::vector<std::pair<std::size_t, std::size_t>> controls; // (wire, value)
  GatePayload payload;
  int party = -1; // >= 0 when the gate is exactly that party's unitary
};

class CircuitOracle {
 public:
  CircuitOracle() = default;
  CircuitOracle(std::vector<std::size_t> wire_dims, std::vector<Gate> gates);

  const std::vector<Gate> &gates() const { return gates_; }
  const std::vector<std::size_t> &wire_dims() const { return dims_; }
  std::string description() const;

  // Gates applied in listed (time) order.
  Matrix evaluate(const std::vector<Matrix> &unitaries) const;

  // Gates before and after the party's own gate, with the party's wire moved
  // to the front: evaluate(U) = phi (U_k (x) id) pi.
  std::pair<Matrix, Matrix> frame(std::size_t party, const std::vector<Matrix> &unitaries) const;

 private:
  Matrix gate_matrix(const Gate &g, const std::vector<Matrix> &unitaries) const;
  std::vector<std::size_t> dims_;
  std::vector<Gate> gates_;
  std::size_t total_ = 1;
};

// |0><0| (x) U_B U_A + |1><1| (x) U_A U_B on control (x) system.
Matrix switch_map(const Matrix &u_a, const Matrix &u_b);

struct SwitchZoo {
  ProcessVector w;
  CircuitOracle frame_a; // control C, target S; Alice between Bob's controlled gates
  CircuitOracle frame_b;
};

SwitchZoo quantum_switch();

// v[0..N]: G = v_N (U_N (x) id) ... v_1 (U_1 (x) id) v_0, parties A, B, ...
// of dimension d acting on the leading factor of the memory register.
ProcessVector causal_chain(const std::vector<Matrix> &v, std::size_t d = 2);

std::array<int, 3> f_bw(int a, int b, int c);
ProcessVector bw_process();
ProcessVector bw_reverse();
CircuitOracle circuit_swiss();
CircuitOracle circuit_rev_swiss();

struct Loop {
  std::string sink;   // wire read at the end of the circuit
  std::string source; // wire fed at the start of the circuit
};

// Stages act on the full wire register in order; each receives the party
// unitaries and may ignore them.
struct LoopCircuit {
  SpaceLayout wires;
  std::vector<GatePayload> stages;
  std::vector<Loop> loops;
};

// Every loop contracted with the unnormalized |id>>: the exact linear
// post-selected result from free input wires to free output wires.
LabeledOperator ctc_simulate(const LoopCircuit &c, const std::vector<Matrix> &unitaries);

// Success probability of the physical realization: normalized |Phi+> per
// loop and post-selection on the |Phi+> Bell outcome, for input state rho.
double ctc_success_probability(const LoopCircuit &c, const std::vector<Matrix> &unitaries,
                               const Matrix &rho_in);

// Loop circuit whose contraction is the induced map of bw_reverse.
LoopCircuit rev_swiss_ctc();

std::vector<std::string> zoo_names();
ProcessVector zoo_process(const std::string &name);

} // namespace cframes

#endif
