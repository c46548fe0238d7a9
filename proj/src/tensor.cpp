/**
 * This code is part of causalframes.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "cframes/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace cframes {

namespace {

std::vector<std::size_t> strides(const SpaceLayout &l) {
  std::vector<std::size_t> s(l.size(), 1);
  for (std::size_t k = l.size(); k-- > 1;)
    s[k - 1] = s[k] * l[k].dim;
  return s;
}

std::vector<std::string> concat_labels(std::vector<std::string> a,
                                       const std::vector<std::string> &b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

void require_square_labels(const LabeledOperator &op, const std::vector<std::string> &labels,
                           const char *what) {
  for (const auto &l : labels) {
    if (!op.in.contains(l) || !op.out.contains(l))
      throw LayoutError(std::string(what) + ": label '" + l + "' missing on one side");
    if (op.in.dim_of(l) != op.out.dim_of(l))
      throw LayoutError(std::string(what) + ": label '" + l + "' has mismatched dimensions");
  }
}

} // namespace

SpaceLayout::SpaceLayout(std::vector<Factor> factors) : factors_(std::move(factors)) {
  std::set<std::string> seen;
  for (const auto &f : factors_) {
    if (f.dim == 0)
      throw LayoutError("factor '" + f.label + "' has dimension 0");
    if (!seen.insert(f.label).second)
      throw LayoutError("duplicate factor label '" + f.label + "'");
  }
}

std::size_t SpaceLayout::total_dim() const {
  std::size_t d = 1;
  for (const auto &f : factors_)
    d *= f.dim;
  return d;
}

std::optional<std::size_t> SpaceLayout::find(const std::string &label) const {
  for (std::size_t i = 0; i < factors_.size(); ++i)
    if (factors_[i].label == label)
      return i;
  return std::nullopt;
}

std::size_t SpaceLayout::index_of(const std::string &label) const {
  auto i = find(label);
  if (!i)
    throw LayoutError("unknown factor label '" + label + "'");
  return *i;
}

std::size_t SpaceLayout::dim_of(const std::string &label) const {
  return factors_[index_of(label)].dim;
}

std::vector<std::string> SpaceLayout::labels() const {
  std::vector<std::string> out;
  for (const auto &f : factors_)
    out.push_back(f.label);
  return out;
}

SpaceLayout SpaceLayout::select(const std::vector<std::string> &labels) const {
  std::vector<Factor> out;
  for (const auto &l : labels)
    out.push_back(factors_[index_of(l)]);
  return SpaceLayout(out);
}

SpaceLayout SpaceLayout::without(const std::vector<std::string> &labels) const {
  for (const auto &l : labels)
    index_of(l);
  std::vector<Factor> out;
  for (const auto &f : factors_)
    if (std::find(labels.begin(), labels.end(), f.label) == labels.end())
      out.push_back(f);
  return SpaceLayout(out);
}

SpaceLayout SpaceLayout::concat(const SpaceLayout &other) const {
  auto f = factors_;
  f.insert(f.end(), other.factors_.begin(), other.factors_.end());
  return SpaceLayout(f);
}

SpaceLayout SpaceLayout::relabel(const std::string &from, const std::string &to) const {
  auto f = factors_;
  f[index_of(from)].label = to;
  return SpaceLayout(f);
}

std::vector<std::size_t> permutation_map(const SpaceLayout &from,
                                         const std::vector<std::string> &order) {
  if (order.size() != from.size())
    throw LayoutError("permutation must list every factor exactly once");
  auto old_strides = strides(from);
  std::vector<std::size_t> dims, pos_stride;
  std::set<std::string> seen;
  for (const auto &l : order) {
    if (!seen.insert(l).second)
      throw LayoutError("permutation repeats label '" + l + "'");
    std::size_t i = from.index_of(l);
    dims.push_back(from[i].dim);
    pos_stride.push_back(old_strides[i]);
  }
  const std::size_t total = from.total_dim();
  std::vector<std::size_t> map(total);
  std::vector<std::size_t> digit(dims.size(), 0);
  std::size_t old = 0;
  for (std::size_t n = 0; n < total; ++n) {
    map[n] = old;
    for (std::size_t k = dims.size(); k-- > 0;) {
      if (++digit[k] < dims[k]) {
        old += pos_stride[k];
        break;
      }
      old -= pos_stride[k] * (dims[k] - 1);
      digit[k] = 0;
    }
  }
  return map;
}

LabeledVector::LabeledVector(SpaceLayout l, Vector d) : layout(std::move(l)), data(std::move(d)) {
  if (static_cast<std::size_t>(data.size()) != layout.total_dim())
    throw LayoutError("vector length does not match layout dimension");
}

LabeledOperator::LabeledOperator(SpaceLayout i, SpaceLayout o, Matrix d)
    : in(std::move(i)), out(std::move(o)), data(std::move(d)) {
  if (static_cast<std::size_t>(data.cols()) != in.total_dim() ||
      static_cast<std::size_t>(data.rows()) != out.total_dim())
    throw LayoutError("operator shape does not match layouts");
}

LabeledVector permute(const LabeledVector &v, const std::vector<std::string> &order) {
  auto map = permutation_map(v.layout, order);
  Vector out(v.data.size());
  for (std::size_t n = 0; n < map.size(); ++n)
    out[n] = v.data[map[n]];
  return {v.layout.select(order), out};
}

LabeledOperator permute(const LabeledOperator &op, const std::vector<std::string> &in_order,
                        const std::vector<std::string> &out_order) {
  auto cm = permutation_map(op.in, in_order);
  auto rm = permutation_map(op.out, out_order);
  Matrix out(op.data.rows(), op.data.cols());
  for (std::size_t c = 0; c < cm.size(); ++c)
    for (std::size_t r = 0; r < rm.size(); ++r)
      out(r, c) = op.data(rm[r], cm[c]);
  return {op.in.select(in_order), op.out.select(out_order), out};
}

LabeledVector double_ket(const LabeledOperator &op) {
  // Column-major storage of K already has K(j, i) at i * d_out + j.
  Vector v = Eigen::Map<const Vector>(op.data.data(), op.data.size());
  return {op.in.concat(op.out), v};
}

LabeledOperator unket(const LabeledVector &v, const std::vector<std::string> &in_labels) {
  auto rest = v.layout.without(in_labels).labels();
  auto p = permute(v, concat_labels(in_labels, rest));
  SpaceLayout in = v.layout.select(in_labels);
  SpaceLayout out = v.layout.select(rest);
  Matrix k = Eigen::Map<const Matrix>(p.data.data(), out.total_dim(), in.total_dim());
  return {in, out, k};
}

LabeledOperator partial_trace(const LabeledOperator &op, const std::vector<std::string> &labels) {
  require_square_labels(op, labels, "partial_trace");
  auto rin = op.in.without(labels).labels();
  auto rout = op.out.without(labels).labels();
  auto p = permute(op, concat_labels(rin, labels), concat_labels(rout, labels));
  const Eigen::Index t = static_cast<Eigen::Index>(op.in.select(labels).total_dim());
  const Eigen::Index ri = p.data.cols() / t, ro = p.data.rows() / t;
  Matrix out = Matrix::Zero(ro, ri);
  for (Eigen::Index c = 0; c < ri; ++c)
    for (Eigen::Index r = 0; r < ro; ++r) {
      cplx s = 0;
      for (Eigen::Index k = 0; k < t; ++k)
        s += p.data(r * t + k, c * t + k);
      out(r, c) = s;
    }
  return {op.in.select(rin), op.out.select(rout), out};
}

LabeledOperator partial_transpose(const LabeledOperator &op,
                                  const std::vector<std::string> &labels) {
  require_square_labels(op, labels, "partial_transpose");
  auto rin = op.in.without(labels).labels();
  auto rout = op.out.without(labels).labels();
  auto p = permute(op, concat_labels(rin, labels), concat_labels(rout, labels));
  const Eigen::Index t = static_cast<Eigen::Index>(op.in.select(labels).total_dim());
  Matrix q(p.data.rows(), p.data.cols());
  for (Eigen::Index c = 0; c < p.data.cols() / t; ++c)
    for (Eigen::Index r = 0; r < p.data.rows() / t; ++r)
      q.block(r * t, c * t, t, t) = p.data.block(r * t, c * t, t, t).transpose();
  LabeledOperator tmp{p.in, p.out, q};
  return permute(tmp, op.in.labels(), op.out.labels());
}

Matrix kron(const Matrix &a, const Matrix &b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix kron_all(const std::vector<Matrix> &ops) {
  Matrix out = Matrix::Identity(1, 1);
  for (const auto &o : ops)
    out = kron(out, o);
  return out;
}

LabeledOperator kron(const LabeledOperator &a, const LabeledOperator &b) {
  return {a.in.concat(b.in), a.out.concat(b.out), kron(a.data, b.data)};
}

LabeledVector kron(const LabeledVector &a, const LabeledVector &b) {
  Matrix m = kron(Matrix(a.data), Matrix(b.data));
  return {a.layout.concat(b.layout), Vector(m.col(0))};
}

LabeledVector contract(const LabeledVector &a, const LabeledVector &b) {
  std::vector<std::string> shared;
  for (const auto &f : a.layout.factors())
    if (b.layout.contains(f.label)) {
      if (b.layout.dim_of(f.label) != f.dim)
        throw LayoutError("contract: label '" + f.label + "' has mismatched dimensions");
      shared.push_back(f.label);
    }
  auto ra = a.layout.without(shared).labels();
  auto rb = b.layout.without(shared).labels();
  auto pa = permute(a, concat_labels(ra, shared));
  auto pb = permute(b, concat_labels(shared, rb));
  const Eigen::Index s = static_cast<Eigen::Index>(a.layout.select(shared).total_dim());
  const Eigen::Index na = pa.data.size() / s, nb = pb.data.size() / s;
  Eigen::Map<const RowMatrix> ma(pa.data.data(), na, s);
  Eigen::Map<const RowMatrix> mb(pb.data.data(), s, nb);
  RowMatrix prod = ma * mb;
  Vector out = Eigen::Map<const Vector>(prod.data(), prod.size());
  return {a.layout.select(ra).concat(b.layout.select(rb)), out};
}

LabeledVector apply(const LabeledOperator &op, const LabeledVector &v) {
  auto in = op.in.labels();
  for (const auto &l : in)
    if (v.layout.dim_of(l) != op.in.dim_of(l))
      throw LayoutError("apply: dimension mismatch on '" + l + "'");
  auto rest = v.layout.without(in).labels();
  auto p = permute(v, concat_labels(in, rest));
  const Eigen::Index di = op.data.cols(), nr = p.data.size() / di;
  Eigen::Map<const RowMatrix> m(p.data.data(), di, nr);
  RowMatrix prod = op.data * m;
  Vector out = Eigen::Map<const Vector>(prod.data(), prod.size());
  return {op.out.concat(v.layout.select(rest)), out};
}

std::vector<Matrix> unitary_basis(std::size_t d) {
  std::vector<Matrix> out;
  const double tau = 2.0 * std::numbers::pi / static_cast<double>(d);
  for (std::size_t m = 0; m < d; ++m)
    for (std::size_t n = 0; n < d; ++n) {
      Matrix u = Matrix::Zero(d, d);
      for (std::size_t k = 0; k < d; ++k)
        u((k + m) % d, k) = std::polar(1.0, tau * static_cast<double>((k * n) % d));
      out.push_back(u);
    }
  return out;
}

Vector basis_coefficients(const Matrix &x, const std::vector<Matrix> &basis) {
  Vector c(basis.size());
  const double d = static_cast<double>(x.rows());
  for (std::size_t i = 0; i < basis.size(); ++i)
    c[i] = (basis[i].adjoint() * x).trace() / d;
  return c;
}

std::vector<Matrix> gell_mann_basis(std::size_t d) {
  std::vector<Matrix> out;
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = j + 1; k < d; ++k) {
      Matrix s = Matrix::Zero(d, d), a = Matrix::Zero(d, d);
      s(j, k) = s(k, j) = 1.0;
      a(j, k) = cplx(0, -1);
      a(k, j) = cplx(0, 1);
      out.push_back(s);
      out.push_back(a);
    }
  for (std::size_t l = 1; l < d; ++l) {
    Matrix h = Matrix::Zero(d, d);
    const double norm = std::sqrt(2.0 / static_cast<double>(l * (l + 1)));
    for (std::size_t k = 0; k < l; ++k)
      h(k, k) = norm;
    h(l, l) = -norm * static_cast<double>(l);
    out.push_back(h);
  }
  return out;
}

std::vector<Matrix> hermitian_basis(std::size_t d) {
  std::vector<Matrix> out{Matrix::Identity(d, d)};
  for (auto &g : gell_mann_basis(d))
    out.push_back(g);
  return out;
}

double unitarity_residual(const Matrix &u) {
  if (u.rows() != u.cols())
    return std::numeric_limits<double>::infinity();
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).norm();
}

bool is_unitary(const Matrix &u, double tol) { return unitarity_residual(u) <= tol; }

} // namespace cframes
