/**
 * This code is part of causalframes.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "cframes/frames.hpp"

#include <algorithm>
#include <cmath>

namespace cframes {

namespace {

Matrix unit(std::size_t d, std::size_t a, std::size_t b) {
  Matrix m = Matrix::Zero(d, d);
  m(a, b) = 1.0;
  return m;
}

Matrix embed(const Matrix &u, std::size_t d_e) {
  return kron(u, Matrix(Matrix::Identity(d_e, d_e)));
}

// tr over the trailing E factor of an operator on A (x) E.
Matrix trace_env(const Matrix &m, std::size_t d_a, std::size_t d_e) {
  Matrix out = Matrix::Zero(d_a, d_a);
  for (std::size_t a = 0; a < d_a; ++a)
    for (std::size_t b = 0; b < d_a; ++b)
      for (std::size_t e = 0; e < d_e; ++e)
        out(a, b) += m(a * d_e + e, b * d_e + e);
  return out;
}

// tr over the leading A factor.
Matrix trace_party(const Matrix &m, std::size_t d_a, std::size_t d_e) {
  Matrix out = Matrix::Zero(d_e, d_e);
  for (std::size_t a = 0; a < d_a; ++a)
    out += m.block(a * d_e, a * d_e, d_e, d_e);
  return out;
}

void fix_phase(Vector &v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > 1e-12) {
      v *= std::conj(v[i]) / std::abs(v[i]);
      return;
    }
}

std::vector<Matrix> with_party(const std::vector<Matrix> &others, std::size_t party,
                               const Matrix &u) {
  std::vector<Matrix> all = others;
  all.insert(all.begin() + static_cast<std::ptrdiff_t>(party), u);
  return all;
}

} // namespace

Matrix MarcusDecomposition::apply(const Matrix &u) const {
  return a_op * embed(transposed ? Matrix(u.transpose()) : u, d_e) * b_op;
}

MarcusDecomposition marcus_extract(const UnitaryOracle &f, std::size_t d_a, std::size_t d_e,
                                   const MarcusOptions &opt) {
  if (d_a == 0 || d_e == 0)
    throw InvalidInput("marcus_extract: dimensions must be positive");
  const std::size_t n = d_a * d_e;
  Rng rng(opt.seed);

  const auto basis = unitary_basis(d_a);
  std::vector<Matrix> fb;
  double worst_unitary = 0.0;
  for (const auto &u : basis) {
    fb.push_back(f(u));
    if (static_cast<std::size_t>(fb.back().rows()) != n ||
        static_cast<std::size_t>(fb.back().cols()) != n)
      throw InvalidInput("marcus_extract: oracle output has the wrong dimension");
    worst_unitary = std::max(worst_unitary, unitarity_residual(fb.back()));
  }
  if (worst_unitary > opt.tol)
    throw NumericalError("marcus_extract: oracle is not unitarity-preserving", worst_unitary);

  auto f_lin = [&](const Matrix &x) {
    Vector c = basis_coefficients(x, basis);
    Matrix out = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < basis.size(); ++i)
      out += c[i] * fb[i];
    return out;
  };
  double lin_res = 0.0;
  for (std::size_t s = 0; s < opt.linearity_samples; ++s) {
    Matrix u = haar_unitary(d_a, rng);
    lin_res = std::max(lin_res, (f(u) - f_lin(u)).norm());
  }
  if (lin_res > opt.tol)
    throw NumericalError("marcus_extract: oracle is not linear", lin_res);

  const Matrix f_id = f_lin(Matrix::Identity(d_a, d_a));
  auto f1 = [&](const Matrix &x) -> Matrix { return f_id.adjoint() * f_lin(x); };

  // P_a = f1(|a><a|) are orthogonal projectors of rank d_E.
  for (std::size_t a = 0; a < d_a; ++a) {
    Matrix p = f1(unit(d_a, a, a));
    double proj = (p * p - p).norm() + (p - p.adjoint()).norm();
    if (proj > 1e-6)
      throw NumericalError("marcus_extract: f(|a><a|) is not a projector", proj);
    double rank = p.trace().real();
    if (std::abs(rank - static_cast<double>(d_e)) > 1e-6)
      throw NumericalError("marcus_extract: projector rank differs from d_E",
                           std::abs(rank - static_cast<double>(d_e)));
  }

  Matrix p0 = f1(unit(d_a, 0, 0));
  Eigen::SelfAdjointEigenSolver<Matrix> es0((p0 + p0.adjoint()) / 2.0);
  Matrix v0 = es0.eigenvectors().rightCols(static_cast<Eigen::Index>(d_e));

  const bool transposed = d_a > 1 && (f1(unit(d_a, 0, 1)) * v0.col(0)).norm() > 0.5;

  // Align every block to the first one through f1(|b><0|) (or its transpose).
  Matrix v(n, n);
  for (std::size_t b = 0; b < d_a; ++b) {
    Matrix vb = (transposed ? f1(unit(d_a, 0, b)) : f1(unit(d_a, b, 0))) * v0;
    for (std::size_t e = 0; e < d_e; ++e)
      v.row(static_cast<Eigen::Index>(b * d_e + e)) = vb.col(static_cast<Eigen::Index>(e)).adjoint();
  }

  auto g = [&](const Matrix &x) -> Matrix {
    return trace_env(v * f1(x) * v.adjoint(), d_a, d_e) / static_cast<double>(d_e);
  };
  const Matrix g_id = g(Matrix::Identity(d_a, d_a));
  auto h = [&](const Matrix &x) -> Matrix { return g(x) * g_id.adjoint(); };

  Matrix h00 = h(unit(d_a, 0, 0));
  Eigen::SelfAdjointEigenSolver<Matrix> esh((h00 + h00.adjoint()) / 2.0);
  Vector c0 = esh.eigenvectors().col(static_cast<Eigen::Index>(d_a) - 1);
  fix_phase(c0);

  Matrix c(d_a, d_a);
  for (std::size_t b = 0; b < d_a; ++b)
    c.col(static_cast<Eigen::Index>(b)) =
        (transposed ? h(unit(d_a, 0, b)) : h(unit(d_a, b, 0))) * c0;
  Matrix d = c.adjoint() * g_id;

  MarcusDecomposition out;
  out.d_a = d_a;
  out.d_e = d_e;
  out.transposed = transposed;
  out.a_op = f_id * v.adjoint() * embed(c, d_e);
  out.b_op = embed(d, d_e) * v;
  for (std::size_t s = 0; s < opt.residual_samples; ++s) {
    Matrix u = haar_unitary(d_a, rng);
    out.residual = std::max(out.residual, (f(u) - out.apply(u)).norm());
  }
  if (out.residual > opt.tol)
    throw NumericalError("marcus_extract: decomposition does not reproduce the oracle",
                         out.residual);
  return out;
}

Matrix FrameDecomposition::product(const Matrix &u) const {
  return phi_op.data * embed(u, env_dim) * pi_op.data;
}

FrameDecomposition extract_frame(const ProcessVector &w, const std::string &party,
                                 const std::vector<Matrix> &others, const MarcusOptions &opt) {
  const auto &layout = w.layout;
  const std::size_t k = layout.party_index(party);
  const auto &spec = layout.parties()[k];
  if (others.size() + 1 != layout.parties().size())
    throw LayoutError("extract_frame: one fixed unitary per other party required");
  if (spec.d_in != spec.d_out)
    throw LayoutError("extract_frame: party has unequal input/output dimensions");
  const std::size_t dp = layout.p_dim(), df = layout.f_dim();
  if (dp != df)
    throw LayoutError("extract_frame: d_P must equal d_F");
  if (dp % spec.d_in != 0)
    throw LayoutError("extract_frame: party dimension does not divide d_P");
  const std::size_t d_e = dp / spec.d_in;
  auto oracle = [&](const Matrix &u) { return multilinear_map(w, with_party(others, k, u)); };
  MarcusDecomposition m = marcus_extract(oracle, spec.d_in, d_e, opt);
  if (m.transposed)
    throw TransposeDetected("extract_frame: transposed branch detected; the process is invalid");

  FrameDecomposition out;
  out.party = spec;
  out.party_index = k;
  out.fixed_unitaries = others;
  out.env_dim = d_e;
  out.residual = m.residual;
  const auto &space = layout.space();
  SpaceLayout env({{"E_" + party, d_e}});
  out.pi_op = {space.select(layout.past_labels()), space.select(spec.in_labels).concat(env),
               m.b_op};
  out.phi_op = {space.select(spec.out_labels).concat(env),
                space.select(layout.future_labels()), m.a_op};
  return out;
}

FrameGenerator process_frame_generator(const ProcessVector &w, const std::string &party,
                                       const MarcusOptions &opt) {
  const std::size_t k = w.layout.party_index(party);
  return [w, party, k, opt](const std::vector<Matrix> &all) {
    std::vector<Matrix> others = all;
    others.erase(others.begin() + static_cast<std::ptrdiff_t>(k));
    return extract_frame(w, party, others, opt);
  };
}

ConsistencyReport check_consistency(const std::vector<FrameGenerator> &frames,
                                    const std::vector<std::size_t> &party_dims,
                                    std::size_t samples, std::uint64_t seed, double tol) {
  ConsistencyReport rep;
  Rng rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    auto us = haar_unitaries(party_dims, rng);
    std::vector<Matrix> products;
    for (const auto &gen : frames) {
      auto fr = gen(us);
      products.push_back(fr.product(us[fr.party_index]));
    }
    for (std::size_t i = 0; i < products.size(); ++i)
      for (std::size_t j = i + 1; j < products.size(); ++j) {
        if (products[i].rows() != products[j].rows() || products[i].cols() != products[j].cols()) {
          rep.max_residual = std::numeric_limits<double>::infinity();
          continue;
        }
        rep.max_residual = std::max(rep.max_residual, (products[i] - products[j]).norm());
      }
  }
  rep.consistent = rep.max_residual < tol;
  return rep;
}

namespace {

void require_same_shape(const SpaceLayout &s, const std::vector<std::string> &a,
                        const std::vector<std::string> &b, const char *what) {
  if (a.size() != b.size())
    throw LayoutError(std::string("time_reverse: ") + what + " groups differ in factor count");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (s.dim_of(a[i]) != s.dim_of(b[i]))
      throw LayoutError(std::string("time_reverse: ") + what + " dimensions differ");
}

} // namespace

ProcessVector time_reverse(const ProcessVector &w) {
  const auto &l = w.layout;
  const auto &s = l.space();
  require_same_shape(s, l.past_labels(), l.future_labels(), "past/future");
  std::vector<std::string> swapped = s.labels();
  auto swap_groups = [&](const std::vector<std::string> &a, const std::vector<std::string> &b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      auto ia = s.index_of(a[i]), ib = s.index_of(b[i]);
      swapped[ia] = b[i];
      swapped[ib] = a[i];
    }
  };
  swap_groups(l.past_labels(), l.future_labels());
  for (const auto &p : l.parties()) {
    require_same_shape(s, p.in_labels, p.out_labels, "input/output");
    swap_groups(p.in_labels, p.out_labels);
  }
  // Entry at (p, f, i, o) of the result is conj(w) at (f, p, o, i).
  LabeledVector conj{s, w.data.conjugate()};
  auto moved = permute(conj, swapped);
  return {l, moved.data};
}

LabeledOperator delocalised_map(const ProcessVector &w, std::size_t party, const Matrix &u) {
  const auto &l = w.layout;
  const auto &spec = l.parties().at(party);
  LabeledOperator uop{l.space().select(spec.in_labels), l.space().select(spec.out_labels), u};
  auto rest = contract(w.labeled(), double_ket(uop));
  std::vector<std::string> in = l.past_labels(), out = l.future_labels();
  for (std::size_t k = 0; k < l.parties().size(); ++k) {
    if (k == party)
      continue;
    const auto &p = l.parties()[k];
    in.insert(in.end(), p.out_labels.begin(), p.out_labels.end());
    out.insert(out.end(), p.in_labels.begin(), p.in_labels.end());
  }
  auto op = unket(rest, in);
  return permute(op, in, out);
}

Matrix OreshkovDecomposition::xi(const Matrix &u) const {
  return s_op.data * embed(u, env_dim) * t_op.data;
}

ProcessVector OreshkovDecomposition::reassemble() const {
  auto t = double_ket(t_op);
  LabeledOperator s_primed{s_op.in.relabel("E", "E'"), s_op.out, s_op.data};
  auto s = double_ket(s_primed);
  LabeledVector loop{SpaceLayout({{"E", env_dim}, {"E'", env_dim}}),
                     Eigen::Map<const Vector>(Matrix(Matrix::Identity(env_dim, env_dim)).data(),
                                              static_cast<Eigen::Index>(env_dim * env_dim))};
  auto joined = contract(contract(t, loop), s);
  auto ordered = permute(joined, layout.space().labels());
  return {layout, ordered.data};
}

OreshkovDecomposition oreshkov_decompose(const ProcessVector &w, const std::string &party,
                                         const MarcusOptions &opt) {
  const auto &l = w.layout;
  const std::size_t k = l.party_index(party);
  const auto &spec = l.parties()[k];
  if (spec.d_in != spec.d_out)
    throw LayoutError("oreshkov_decompose: party has unequal input/output dimensions");
  auto probe = delocalised_map(w, k, Matrix::Identity(spec.d_in, spec.d_in));
  const std::size_t dpt = probe.in.total_dim();
  if (dpt != probe.out.total_dim() || dpt % spec.d_in != 0)
    throw LayoutError("oreshkov_decompose: incompatible dimensions");
  const std::size_t d_e = dpt / spec.d_in;
  auto oracle = [&](const Matrix &u) { return delocalised_map(w, k, u).data; };
  auto m = marcus_extract(oracle, spec.d_in, d_e, opt);
  if (m.transposed)
    throw TransposeDetected("oreshkov_decompose: transposed branch detected");
  OreshkovDecomposition out;
  out.party = spec;
  out.env_dim = d_e;
  out.residual = m.residual;
  out.layout = l;
  SpaceLayout env({{"E", d_e}});
  out.t_op = {probe.in, l.space().select(spec.in_labels).concat(env), m.b_op};
  out.s_op = {l.space().select(spec.out_labels).concat(env), probe.out, m.a_op};
  return out;
}

double past_gauge_residual(const Matrix &x, const Matrix &y, std::size_t d_a) {
  const std::size_t d_e = static_cast<std::size_t>(x.rows()) / d_a;
  Matrix m = x * y.adjoint();
  Matrix w = trace_party(m, d_a, d_e) / static_cast<double>(d_a);
  return (m - kron(Matrix(Matrix::Identity(d_a, d_a)), w)).norm();
}

double future_gauge_residual(const Matrix &x, const Matrix &y, std::size_t d_a) {
  return past_gauge_residual(x.adjoint(), y.adjoint(), d_a);
}

double past_independence_residual(const std::vector<Matrix> &pis, std::size_t d_a) {
  double r = 0.0;
  for (std::size_t i = 1; i < pis.size(); ++i)
    r = std::max(r, past_gauge_residual(pis[i], pis[0], d_a));
  return r;
}

double future_independence_residual(const std::vector<Matrix> &phis, std::size_t d_a) {
  double r = 0.0;
  for (std::size_t i = 1; i < phis.size(); ++i)
    r = std::max(r, future_gauge_residual(phis[i], phis[0], d_a));
  return r;
}

double linearity_residual(const MultiOracle &family, const std::vector<std::size_t> &dims,
                          std::size_t samples, Rng &rng) {
  std::vector<std::vector<Matrix>> bases;
  std::size_t tuples = 1;
  for (auto d : dims) {
    bases.push_back(unitary_basis(d));
    tuples *= d * d;
  }
  auto tuple_args = [&](std::size_t t) {
    std::vector<Matrix> args(dims.size());
    for (std::size_t k = dims.size(); k-- > 0;) {
      args[k] = bases[k][t % bases[k].size()];
      t /= bases[k].size();
    }
    return args;
  };
  std::vector<Matrix> values;
  for (std::size_t t = 0; t < tuples; ++t)
    values.push_back(family(tuple_args(t)));
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    auto us = haar_unitaries(dims, rng);
    std::vector<Vector> coeff;
    for (std::size_t k = 0; k < dims.size(); ++k)
      coeff.push_back(basis_coefficients(us[k], bases[k]));
    Matrix ext = Matrix::Zero(values[0].rows(), values[0].cols());
    for (std::size_t t = 0; t < tuples; ++t) {
      cplx c = 1.0;
      std::size_t rem = t;
      for (std::size_t k = dims.size(); k-- > 0;) {
        c *= coeff[k][static_cast<Eigen::Index>(rem % bases[k].size())];
        rem /= bases[k].size();
      }
      ext += c * values[t];
    }
    worst = std::max(worst, (family(us) - ext).norm());
  }
  return worst;
}

} // namespace cframes
