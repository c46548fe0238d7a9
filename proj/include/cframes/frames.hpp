/**
 * This code is part of causalframes.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef CFRAMES_FRAMES_HPP
#define CFRAMES_FRAMES_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "cframes/process.hpp"
#include "cframes/random.hpp"

namespace cframes {

using UnitaryOracle = std::function<Matrix(const Matrix &)>;

// f(U) = a_op (U (x) id_E) b_op, or with U^T when `transposed`.
struct MarcusDecomposition {
  Matrix a_op;
  Matrix b_op;
  bool transposed = false;
  double residual = 0.0;
  std::size_t d_a = 1;
  std::size_t d_e = 1;

  Matrix apply(const Matrix &u) const;
};

struct MarcusOptions {
  std::uint64_t seed = 7;
  std::size_t linearity_samples = 10;
  std::size_t residual_samples = 10;
  double tol = 1e-8;
};

class TransposeDetected : public Error {
 public:
  using Error::Error;
};

MarcusDecomposition marcus_extract(const UnitaryOracle &f, std::size_t d_a, std::size_t d_e,
                                   const MarcusOptions &opt = {});

// G(U_A) = phi (U_A (x) id_E) pi with the other parties' unitaries fixed.
struct FrameDecomposition {
  PartySpec party;
  std::size_t party_index = 0;
  std::vector<Matrix> fixed_unitaries;
  LabeledOperator pi_op;  // P -> A (x) E
  LabeledOperator phi_op; // A (x) E -> F
  std::size_t env_dim = 1;
  double residual = 0.0;

  Matrix product(const Matrix &u) const;
};

// `others` lists the unitaries of every other party, in layout order.
FrameDecomposition extract_frame(const ProcessVector &w, const std::string &party,
                                 const std::vector<Matrix> &others, const MarcusOptions &opt = {});

// Maps a full tuple of party unitaries to a frame for one party.
using FrameGenerator = std::function<FrameDecomposition(const std::vector<Matrix> &)>;

FrameGenerator process_frame_generator(const ProcessVector &w, const std::string &party,
                                       const MarcusOptions &opt = {});

struct ConsistencyReport {
  bool consistent = false;
  double max_residual = 0.0;
};

ConsistencyReport check_consistency(const std::vector<FrameGenerator> &frames,
                                    const std::vector<std::size_t> &party_dims,
                                    std::size_t samples, std::uint64_t seed,
                                    double tol = 1e-8);

ProcessVector time_reverse(const ProcessVector &w);

struct OreshkovDecomposition {
  PartySpec party;
  LabeledOperator t_op; // P~ -> A_I (x) E
  LabeledOperator s_op; // A_O (x) E -> F~
  std::size_t env_dim = 1;
  double residual = 0.0;
  ProcessLayout layout; // layout of the decomposed process

  Matrix xi(const Matrix &u) const;
  // <<id|^{EE'} |T>> |S>>, permuted back to `layout`.
  ProcessVector reassemble() const;
};

OreshkovDecomposition oreshkov_decompose(const ProcessVector &w, const std::string &party,
                                         const MarcusOptions &opt = {});

// Single-party map U -> <<U*|_party |w> as an operator P~ -> F~, with
// P~ = P (x) other outputs and F~ = F (x) other inputs in layout order.
LabeledOperator delocalised_map(const ProcessVector &w, std::size_t party, const Matrix &u);

// Gauge probes on operators with output (or input) A (x) E.
// ||Y - id_A (x) tr_A(Y)/d_A|| for Y = x y^dag; zero iff x = (id (x) W) y
// for unitary W.
double past_gauge_residual(const Matrix &x, const Matrix &y, std::size_t d_a);
// Same on the input side: x^dag y in id_A (x) L(E).
double future_gauge_residual(const Matrix &x, const Matrix &y, std::size_t d_a);

// Largest gauge residual of the family against its first member.
double past_independence_residual(const std::vector<Matrix> &pis, std::size_t d_a);
double future_independence_residual(const std::vector<Matrix> &phis, std::size_t d_a);

using MultiOracle = std::function<Matrix(const std::vector<Matrix> &)>;

// Compares `family` on random tuples with the multilinear extension of its
// values on Heisenberg-Weyl basis tuples. Zero iff the family is multilinear.
double linearity_residual(const MultiOracle &family, const std::vector<std::size_t> &dims,
                          std::size_t samples, Rng &rng);

} // namespace cframes

#endif
