/**
 * This code is part of causalframes.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef CFRAMES_TENSOR_HPP
#define CFRAMES_TENSOR_HPP

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cframes/errors.hpp"

namespace cframes {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RowMatrix =
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Factor {
  std::string label;
  std::size_t dim = 1;
  bool operator==(const Factor &o) const = default;
};

// Ordered tensor-product layout. Flat indices are row-major over the
// factors, the first factor being the most significant.
class SpaceLayout {
 public:
  SpaceLayout() = default;
  explicit SpaceLayout(std::vector<Factor> factors);

  std::size_t size() const { return factors_.size(); }
  bool empty() const { return factors_.empty(); }
  const Factor &operator[](std::size_t i) const { return factors_[i]; }
  const std::vector<Factor> &factors() const { return factors_; }
  std::size_t total_dim() const;

  std::optional<std::size_t> find(const std::string &label) const;
  std::size_t index_of(const std::string &label) const;
  bool contains(const std::string &label) const { return find(label).has_value(); }
  std::size_t dim_of(const std::string &label) const;
  std::vector<std::string> labels() const;

  // Sub-layout in the requested order.
  SpaceLayout select(const std::vector<std::string> &labels) const;
  SpaceLayout without(const std::vector<std::string> &labels) const;
  SpaceLayout concat(const SpaceLayout &other) const;
  SpaceLayout relabel(const std::string &from, const std::string &to) const;

  bool operator==(const SpaceLayout &o) const = default;

 private:
  std::vector<Factor> factors_;
};

// For every flat index of the permuted layout, the flat index it came from.
std::vector<std::size_t> permutation_map(const SpaceLayout &from,
                                         const std::vector<std::string> &order);

struct LabeledVector {
  SpaceLayout layout;
  Vector data;

  LabeledVector() = default;
  LabeledVector(SpaceLayout l, Vector d);
};

// Operator from `in` to `out`; `data` has shape out.total_dim() x in.total_dim().
struct LabeledOperator {
  SpaceLayout in;
  SpaceLayout out;
  Matrix data;

  LabeledOperator() = default;
  LabeledOperator(SpaceLayout i, SpaceLayout o, Matrix d);
};

LabeledVector permute(const LabeledVector &v, const std::vector<std::string> &order);
LabeledOperator permute(const LabeledOperator &op, const std::vector<std::string> &in_order,
                        const std::vector<std::string> &out_order);

// |K>> = sum_i |i> (x) K|i>, laid out as in (x) out. Not normalized.
LabeledVector double_ket(const LabeledOperator &op);

// Inverse of double_ket: the listed factors become the input space and the
// remaining ones, in their current order, the output space.
LabeledOperator unket(const LabeledVector &v, const std::vector<std::string> &in_labels);

// Labels must appear on both sides with equal dimension.
LabeledOperator partial_trace(const LabeledOperator &op, const std::vector<std::string> &labels);
LabeledOperator partial_transpose(const LabeledOperator &op,
                                  const std::vector<std::string> &labels);

LabeledOperator kron(const LabeledOperator &a, const LabeledOperator &b);
LabeledVector kron(const LabeledVector &a, const LabeledVector &b);

// Bilinear contraction over all shared labels (no complex conjugation).
// Result layout: remaining factors of a, then remaining factors of b.
LabeledVector contract(const LabeledVector &a, const LabeledVector &b);

// (op (x) id)|v>; the output factors of op come first in the result.
LabeledVector apply(const LabeledOperator &op, const LabeledVector &v);

// Heisenberg-Weyl basis U_{m,n} = sum_k w^{kn} |k+m><k|, index m*d + n.
std::vector<Matrix> unitary_basis(std::size_t d);

// Coefficients c_i = tr(U_i^dag X) / d for an orthogonal unitary basis.
Vector basis_coefficients(const Matrix &x, const std::vector<Matrix> &basis);

// Hermitian orthogonal basis of d x d matrices; the first element is id.
std::vector<Matrix> hermitian_basis(std::size_t d);
// Traceless Hermitian (generalized Gell-Mann) basis, d*d - 1 elements.
std::vector<Matrix> gell_mann_basis(std::size_t d);

Matrix kron(const Matrix &a, const Matrix &b);
Matrix kron_all(const std::vector<Matrix> &ops);

double unitarity_residual(const Matrix &u);
bool is_unitary(const Matrix &u, double tol);

} // namespace cframes

#endif
