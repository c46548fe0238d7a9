/**
 * This code is part of causalframes.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef CFRAMES_PROCESS_HPP
#define CFRAMES_PROCESS_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cframes/tensor.hpp"

namespace cframes {

inline constexpr double kDefaultTolerance = 1e-9;

enum class RoleKind { Past, Future, Input, Output };

struct Role {
  RoleKind kind = RoleKind::Past;
  std::string party;

  static Role past() { return {RoleKind::Past, {}}; }
  static Role future() { return {RoleKind::Future, {}}; }
  static Role input(std::string p) { return {RoleKind::Input, std::move(p)}; }
  static Role output(std::string p) { return {RoleKind::Output, std::move(p)}; }

  // "p", "f", "in:<party>", "out:<party>"
  std::string str() const;
  static Role parse(const std::string &s);
  bool operator==(const Role &o) const = default;
};

// A party may own several input and output factors (padding adds primed ones).
struct PartySpec {
  std::string name;
  std::vector<std::string> in_labels;
  std::vector<std::string> out_labels;
  std::size_t d_in = 1;
  std::size_t d_out = 1;
};

struct PartyDims {
  std::string name;
  std::size_t d_in = 2;
  std::size_t d_out = 2;
};

class ProcessLayout {
 public:
  ProcessLayout() = default;
  ProcessLayout(SpaceLayout space, std::vector<Role> roles);

  // Factors P, F, <name>_I, <name>_O in that order. Dimension-1 P/F
  // factors are kept so that every process has both roles.
  static ProcessLayout standard(std::size_t p_dim, std::size_t f_dim,
                                const std::vector<PartyDims> &parties);

  const SpaceLayout &space() const { return space_; }
  const std::vector<Role> &roles() const { return roles_; }
  const std::vector<PartySpec> &parties() const { return parties_; }
  const std::vector<std::string> &past_labels() const { return past_; }
  const std::vector<std::string> &future_labels() const { return future_; }
  std::size_t p_dim() const;
  std::size_t f_dim() const;
  std::size_t party_index(const std::string &name) const;

  // P..., F..., then each party's inputs and outputs in party order.
  std::vector<std::string> canonical_order() const;
  std::vector<std::string> party_labels() const;
  ProcessLayout permuted(const std::vector<std::string> &order) const;
  ProcessLayout parties_only() const;

  bool operator==(const ProcessLayout &o) const {
    return space_ == o.space_ && roles_ == o.roles_;
  }

 private:
  SpaceLayout space_;
  std::vector<Role> roles_;
  std::vector<PartySpec> parties_;
  std::vector<std::string> past_, future_;
};

struct ProcessVector {
  ProcessLayout layout;
  Vector data;

  ProcessVector() = default;
  ProcessVector(ProcessLayout l, Vector d);
  LabeledVector labeled() const { return {layout.space(), data}; }
  ProcessVector canonical() const;
};

struct ProcessMatrix {
  ProcessLayout layout;
  Matrix data;

  ProcessMatrix() = default;
  ProcessMatrix(ProcessLayout l, Matrix d);
  static ProcessMatrix from_vector(const ProcessVector &w);
  LabeledOperator labeled() const { return {layout.space(), layout.space(), data}; }
  ProcessMatrix canonical() const;
};

struct ValidityReport {
  double psd_margin = 0.0;
  double worst_normalization_residual = 0.0;
  bool verdict = false;
  std::string witness;
  std::size_t tuples_checked = 0;
};

struct PurityReport {
  bool pure = false;
  std::optional<LabeledOperator> u_w;
  double rank_ratio = 0.0;
  double unitarity_residual = 0.0;
};

// Per-party CPTP Choi operators spanning the affine hull of the CPTP set.
std::vector<Matrix> cptp_spanning_set(std::size_t d_in, std::size_t d_out);

ValidityReport validate(const ProcessMatrix &w, double tol = kDefaultTolerance);
// Same certificate for W = |w><w|, without forming the full matrix.
ValidityReport validate(const ProcessVector &w, double tol = kDefaultTolerance);

PurityReport is_pure(const ProcessMatrix &w, double tol = kDefaultTolerance);
PurityReport is_pure(const ProcessVector &w, double tol = kDefaultTolerance);

// U_w : P (x) outputs -> F (x) inputs.
LabeledOperator process_unitary(const ProcessVector &w);

// Multilinear contraction |G>>_{PF} = sum_x w_{P F x} (x)_k |X_k>>; no checks
// on the arguments. Operators are ordered as the layout's parties.
Matrix multilinear_map(const ProcessVector &w, const std::vector<Matrix> &ops);

LabeledOperator induced_map(const ProcessVector &w, const std::vector<Matrix> &unitaries,
                            double tol = kDefaultTolerance);

using InducedOracle = std::function<Matrix(const std::vector<Matrix> &)>;

// Sums over the Heisenberg-Weyl basis unless `bases` supplies one per party.
ProcessVector reconstruct_process(const InducedOracle &g, const std::vector<PartyDims> &parties,
                                  std::size_t p_dim,
                                  const std::optional<std::vector<std::vector<Matrix>>> &bases =
                                      std::nullopt);

ProcessMatrix pad_dimensions(const ProcessMatrix &w);
ProcessVector pad_dimensions(const ProcessVector &w);

enum class StateConvention {
  Transposed, // tr_PF[(rho^T (x) id) W], consistent with the Born rule
  Plain       // tr_PF[(rho (x) id) W]
};

ProcessMatrix reduced_process(const ProcessVector &w, const Matrix &rho_p,
                              StateConvention conv = StateConvention::Transposed);
ProcessMatrix reduced_process(const ProcessMatrix &w, const Matrix &rho_p,
                              StateConvention conv = StateConvention::Transposed);

} // namespace cframes

#endif
