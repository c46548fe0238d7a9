/**
 * This code is part of causalframes.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "cframes/process.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cframes {

namespace {

std::size_t group_dim(const SpaceLayout &s, const std::vector<std::string> &labels) {
  std::size_t d = 1;
  for (const auto &l : labels)
    d *= s.dim_of(l);
  return d;
}

double op_norm(const Matrix &m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

// Contract the trailing factor of dimension x against J:
// out(r, r') = sum_{x, x'} W(r x', r' x) J(x', x).
Matrix contract_trailing(const Matrix &w, const Matrix &j) {
  const Eigen::Index x = j.rows(), r = w.rows() / x;
  Matrix out(r, r);
  for (Eigen::Index b = 0; b < r; ++b)
    for (Eigen::Index a = 0; a < r; ++a)
      out(a, b) = w.block(a * x, b * x, x, x).cwiseProduct(j).sum();
  return out;
}

// Bilinear contraction of the trailing factor with m.
Vector contract_trailing(const Vector &v, const Vector &m) {
  const Eigen::Index x = m.size(), r = v.size() / x;
  Eigen::Map<const RowMatrix> vm(v.data(), r, x);
  return vm * m;
}

struct Weighted {
  double weight;
  Vector v;
};

std::string spanning_name(std::size_t i) {
  return i == 0 ? std::string("J0") : "J0+eps*E" + std::to_string(i);
}

} // namespace

std::string Role::str() const {
  switch (kind) {
  case RoleKind::Past:
    return "p";
  case RoleKind::Future:
    return "f";
  case RoleKind::Input:
    return "in:" + party;
  case RoleKind::Output:
    return "out:" + party;
  }
  return {};
}

Role Role::parse(const std::string &s) {
  if (s == "p")
    return past();
  if (s == "f")
    return future();
  if (s.rfind("in:", 0) == 0 && s.size() > 3)
    return input(s.substr(3));
  if (s.rfind("out:", 0) == 0 && s.size() > 4)
    return output(s.substr(4));
  throw LayoutError("unknown role '" + s + "'");
}

ProcessLayout::ProcessLayout(SpaceLayout space, std::vector<Role> roles)
    : space_(std::move(space)), roles_(std::move(roles)) {
  if (roles_.size() != space_.size())
    throw LayoutError("one role per factor required");
  for (std::size_t i = 0; i < roles_.size(); ++i) {
    const auto &r = roles_[i];
    const auto &label = space_[i].label;
    if (r.kind == RoleKind::Past) {
      past_.push_back(label);
      continue;
    }
    if (r.kind == RoleKind::Future) {
      future_.push_back(label);
      continue;
    }
    auto it = std::find_if(parties_.begin(), parties_.end(),
                           [&](const PartySpec &p) { return p.name == r.party; });
    if (it == parties_.end()) {
      parties_.push_back({r.party, {}, {}, 1, 1});
      it = parties_.end() - 1;
    }
    if (r.kind == RoleKind::Input) {
      it->in_labels.push_back(label);
      it->d_in *= space_[i].dim;
    } else {
      it->out_labels.push_back(label);
      it->d_out *= space_[i].dim;
    }
  }
  for (const auto &p : parties_)
    if (p.in_labels.empty() || p.out_labels.empty())
      throw LayoutError("party '" + p.name + "' needs both input and output factors");
  if (past_.empty() || future_.empty())
    throw LayoutError("process layout needs past and future factors");
}

ProcessLayout ProcessLayout::standard(std::size_t p_dim, std::size_t f_dim,
                                      const std::vector<PartyDims> &parties) {
  std::vector<Factor> f{{"P", p_dim}, {"F", f_dim}};
  std::vector<Role> r{Role::past(), Role::future()};
  for (const auto &p : parties) {
    f.push_back({p.name + "_I", p.d_in});
    f.push_back({p.name + "_O", p.d_out});
    r.push_back(Role::input(p.name));
    r.push_back(Role::output(p.name));
  }
  return {SpaceLayout(f), r};
}

std::size_t ProcessLayout::p_dim() const { return group_dim(space_, past_); }
std::size_t ProcessLayout::f_dim() const { return group_dim(space_, future_); }

std::size_t ProcessLayout::party_index(const std::string &name) const {
  for (std::size_t i = 0; i < parties_.size(); ++i)
    if (parties_[i].name == name)
      return i;
  throw LayoutError("unknown party '" + name + "'");
}

std::vector<std::string> ProcessLayout::party_labels() const {
  std::vector<std::string> out;
  for (const auto &p : parties_) {
    out.insert(out.end(), p.in_labels.begin(), p.in_labels.end());
    out.insert(out.end(), p.out_labels.begin(), p.out_labels.end());
  }
  return out;
}

std::vector<std::string> ProcessLayout::canonical_order() const {
  std::vector<std::string> out = past_;
  out.insert(out.end(), future_.begin(), future_.end());
  auto x = party_labels();
  out.insert(out.end(), x.begin(), x.end());
  return out;
}

ProcessLayout ProcessLayout::permuted(const std::vector<std::string> &order) const {
  std::vector<Role> r;
  for (const auto &l : order)
    r.push_back(roles_[space_.index_of(l)]);
  return {space_.select(order), r};
}

ProcessLayout ProcessLayout::parties_only() const {
  auto labels = party_labels();
  std::vector<Factor> f{{"P", 1}, {"F", 1}};
  std::vector<Role> r{Role::past(), Role::future()};
  for (const auto &l : labels) {
    f.push_back(space_[space_.index_of(l)]);
    r.push_back(roles_[space_.index_of(l)]);
  }
  return {SpaceLayout(f), r};
}

ProcessVector::ProcessVector(ProcessLayout l, Vector d) : layout(std::move(l)), data(std::move(d)) {
  if (static_cast<std::size_t>(data.size()) != layout.space().total_dim())
    throw LayoutError("process vector length does not match layout");
}

ProcessVector ProcessVector::canonical() const {
  auto order = layout.canonical_order();
  if (order == layout.space().labels())
    return *this;
  return {layout.permuted(order), permute(labeled(), order).data};
}

ProcessMatrix::ProcessMatrix(ProcessLayout l, Matrix d) : layout(std::move(l)), data(std::move(d)) {
  const auto n = layout.space().total_dim();
  if (static_cast<std::size_t>(data.rows()) != n || static_cast<std::size_t>(data.cols()) != n)
    throw LayoutError("process matrix shape does not match layout");
}

ProcessMatrix ProcessMatrix::from_vector(const ProcessVector &w) {
  return {w.layout, w.data * w.data.adjoint()};
}

ProcessMatrix ProcessMatrix::canonical() const {
  auto order = layout.canonical_order();
  if (order == layout.space().labels())
    return *this;
  return {layout.permuted(order), permute(labeled(), order, order).data};
}

std::vector<Matrix> cptp_spanning_set(std::size_t d_in, std::size_t d_out) {
  const double dout = static_cast<double>(d_out);
  Matrix j0 = Matrix::Identity(d_in * d_out, d_in * d_out) / dout;
  std::vector<Matrix> dirs;
  for (const auto &g : hermitian_basis(d_in))
    for (const auto &l : gell_mann_basis(d_out))
      dirs.push_back(kron(g, l));
  double max_norm = 0.0;
  for (const auto &d : dirs)
    max_norm = std::max(max_norm, op_norm(d));
  std::vector<Matrix> out{j0};
  if (dirs.empty())
    return out;
  const double eps = 1.0 / (2.0 * dout * max_norm);
  for (const auto &d : dirs)
    out.push_back(j0 + eps * d);
  return out;
}

namespace {

struct NormalizationSearch {
  const std::vector<std::vector<Matrix>> *spans;
  std::size_t p_dim, f_dim;
  double tol;
  ValidityReport *report;
  std::vector<std::size_t> choice;
  std::vector<std::string> names;

  void record(const Matrix &trf) {
    ++report->tuples_checked;
    double r = (trf - Matrix::Identity(p_dim, p_dim)).norm();
    if (r > report->worst_normalization_residual) {
      report->worst_normalization_residual = r;
      if (r > tol) {
        std::ostringstream os;
        for (std::size_t k = 0; k < choice.size(); ++k)
          os << (k ? ", " : "") << names[k] << ":" << spanning_name(choice[k]);
        report->witness = os.str();
      }
    }
  }

  Matrix trace_future(const Matrix &g) const {
    Matrix out = Matrix::Zero(p_dim, p_dim);
    for (std::size_t b = 0; b < p_dim; ++b)
      for (std::size_t a = 0; a < p_dim; ++a)
        for (std::size_t f = 0; f < f_dim; ++f)
          out(a, b) += g(a * f_dim + f, b * f_dim + f);
    return out;
  }

  // Parties are contracted from the last one backwards.
  void run_matrix(const Matrix &w, std::size_t k) {
    if (k == 0) {
      record(trace_future(w));
      return;
    }
    const auto &span = (*spans)[k - 1];
    for (std::size_t i = 0; i < span.size(); ++i) {
      choice[k - 1] = i;
      run_matrix(contract_trailing(w, span[i]), k - 1);
    }
  }

  void run_vector(const std::vector<Weighted> &vs, std::size_t k,
                  const std::vector<std::vector<std::vector<Weighted>>> &eig) {
    if (k == 0) {
      Matrix acc = Matrix::Zero(p_dim, p_dim);
      for (const auto &w : vs) {
        Eigen::Map<const RowMatrix> g(w.v.data(), p_dim, f_dim);
        acc += w.weight * (g * g.adjoint());
      }
      record(acc);
      return;
    }
    const auto &span = eig[k - 1];
    for (std::size_t i = 0; i < span.size(); ++i) {
      choice[k - 1] = i;
      std::vector<Weighted> next;
      for (const auto &w : vs)
        for (const auto &m : span[i])
          next.push_back({w.weight * m.weight, contract_trailing(w.v, m.v)});
      run_vector(next, k - 1, eig);
    }
  }
};

std::vector<std::string> party_names(const ProcessLayout &l) {
  std::vector<std::string> out;
  for (const auto &p : l.parties())
    out.push_back(p.name);
  return out;
}

} // namespace

ValidityReport validate(const ProcessMatrix &w_in, double tol) {
  auto w = w_in.canonical();
  const double scale = 1.0 + w.data.norm();
  if ((w.data - w.data.adjoint()).norm() > tol * scale)
    throw InvalidInput("process matrix is not Hermitian");
  ValidityReport rep;
  Eigen::SelfAdjointEigenSolver<Matrix> es(w.data, Eigen::EigenvaluesOnly);
  rep.psd_margin = es.eigenvalues()(0);
  std::vector<std::vector<Matrix>> spans;
  for (const auto &p : w.layout.parties())
    spans.push_back(cptp_spanning_set(p.d_in, p.d_out));
  NormalizationSearch s{&spans, w.layout.p_dim(), w.layout.f_dim(), tol, &rep,
                        std::vector<std::size_t>(spans.size()), party_names(w.layout)};
  s.run_matrix(w.data, spans.size());
  const bool psd_ok = rep.psd_margin >= -tol * scale;
  rep.verdict = psd_ok && rep.worst_normalization_residual <= tol;
  if (!psd_ok && rep.witness.empty())
    rep.witness = "negative eigenvalue " + std::to_string(rep.psd_margin);
  return rep;
}

ValidityReport validate(const ProcessVector &w_in, double tol) {
  auto w = w_in.canonical();
  ValidityReport rep;
  rep.psd_margin = 0.0;
  std::vector<std::vector<std::vector<Weighted>>> eig;
  for (const auto &p : w.layout.parties()) {
    std::vector<std::vector<Weighted>> per;
    for (const auto &j : cptp_spanning_set(p.d_in, p.d_out)) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(j);
      std::vector<Weighted> terms;
      for (Eigen::Index r = 0; r < j.rows(); ++r)
        if (std::abs(es.eigenvalues()(r)) > 1e-15)
          terms.push_back({es.eigenvalues()(r), es.eigenvectors().col(r)});
      per.push_back(terms);
    }
    eig.push_back(per);
  }
  std::vector<std::vector<Matrix>> unused;
  NormalizationSearch s{&unused, w.layout.p_dim(), w.layout.f_dim(), tol, &rep,
                        std::vector<std::size_t>(eig.size()), party_names(w.layout)};
  s.run_vector({{1.0, w.data}}, eig.size(), eig);
  rep.verdict = rep.worst_normalization_residual <= tol;
  return rep;
}

LabeledOperator process_unitary(const ProcessVector &w) {
  std::vector<std::string> in = w.layout.past_labels();
  for (const auto &p : w.layout.parties())
    in.insert(in.end(), p.out_labels.begin(), p.out_labels.end());
  auto u = unket(w.labeled(), in);
  std::vector<std::string> out = w.layout.future_labels();
  for (const auto &p : w.layout.parties())
    out.insert(out.end(), p.in_labels.begin(), p.in_labels.end());
  return permute(u, in, out);
}

PurityReport is_pure(const ProcessVector &w, double tol) {
  PurityReport rep;
  auto u = process_unitary(w);
  rep.unitarity_residual = unitarity_residual(u.data);
  rep.pure = rep.unitarity_residual <= 10.0 * tol * std::sqrt(static_cast<double>(u.data.rows()));
  if (rep.pure)
    rep.u_w = u;
  return rep;
}

PurityReport is_pure(const ProcessMatrix &w, double tol) {
  PurityReport rep;
  Eigen::SelfAdjointEigenSolver<Matrix> es(w.data);
  const Eigen::Index n = w.data.rows();
  const double tr = w.data.trace().real();
  const double l1 = es.eigenvalues()(n - 1);
  const double l2 = n > 1 ? es.eigenvalues()(n - 2) : 0.0;
  rep.rank_ratio = tr > 0 ? l2 / tr : 1.0;
  if (l2 > 1e-9 * tr || l1 <= 0)
    return rep;
  Vector v = es.eigenvectors().col(n - 1) * std::sqrt(l1);
  ProcessVector pv(w.layout, v);
  auto sub = is_pure(pv, tol);
  rep.unitarity_residual = sub.unitarity_residual;
  rep.pure = sub.pure;
  rep.u_w = sub.u_w;
  return rep;
}

Matrix multilinear_map(const ProcessVector &w_in, const std::vector<Matrix> &ops) {
  auto w = w_in.canonical();
  const auto &parties = w.layout.parties();
  if (ops.size() != parties.size())
    throw LayoutError("one operator per party required");
  Matrix x = Matrix::Identity(1, 1);
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const auto &p = parties[k];
    if (static_cast<std::size_t>(ops[k].cols()) != p.d_in ||
        static_cast<std::size_t>(ops[k].rows()) != p.d_out)
      throw LayoutError("operator for party '" + p.name + "' has wrong shape");
    Vector dk = Eigen::Map<const Vector>(ops[k].data(), ops[k].size());
    x = kron(x, Matrix(dk));
  }
  const std::size_t dp = w.layout.p_dim(), df = w.layout.f_dim();
  Eigen::Map<const RowMatrix> wm(w.data.data(), dp * df, x.rows());
  Vector g = wm * x.col(0);
  return Eigen::Map<const Matrix>(g.data(), df, dp);
}

LabeledOperator induced_map(const ProcessVector &w, const std::vector<Matrix> &unitaries,
                            double tol) {
  const auto &parties = w.layout.parties();
  if (unitaries.size() != parties.size())
    throw LayoutError("one unitary per party required");
  for (std::size_t k = 0; k < unitaries.size(); ++k) {
    if (parties[k].d_in != parties[k].d_out)
      throw LayoutError("party '" + parties[k].name + "' has unequal input/output dimensions");
    double r = unitarity_residual(unitaries[k]);
    if (r > tol * static_cast<double>(parties[k].d_in) * 10)
      throw NumericalError("argument for party '" + parties[k].name + "' is not unitary", r);
  }
  Matrix g = multilinear_map(w, unitaries);
  return {w.layout.space().select(w.layout.past_labels()),
          w.layout.space().select(w.layout.future_labels()), g};
}

ProcessVector reconstruct_process(const InducedOracle &g, const std::vector<PartyDims> &parties,
                                  std::size_t p_dim,
                                  const std::optional<std::vector<std::vector<Matrix>>> &bases) {
  std::vector<std::vector<Matrix>> b;
  std::size_t norm = 1;
  for (std::size_t k = 0; k < parties.size(); ++k) {
    if (parties[k].d_in != parties[k].d_out)
      throw LayoutError("reconstruction needs equal input/output dimensions");
    b.push_back(bases ? (*bases)[k] : unitary_basis(parties[k].d_in));
    norm *= parties[k].d_in;
  }
  std::size_t tuples = 1;
  for (const auto &bk : b)
    tuples *= bk.size();
  std::optional<std::size_t> f_dim;
  Vector acc;
  std::vector<Matrix> args(parties.size());
  for (std::size_t t = 0; t < tuples; ++t) {
    Matrix x = Matrix::Identity(1, 1);
    std::size_t rem = t;
    for (std::size_t k = parties.size(); k-- > 0;) {
      args[k] = b[k][rem % b[k].size()];
      rem /= b[k].size();
    }
    for (std::size_t k = 0; k < parties.size(); ++k) {
      Matrix c = args[k].conjugate();
      x = kron(x, Matrix(Eigen::Map<const Vector>(c.data(), c.size())));
    }
    Matrix gv = g(args);
    if (static_cast<std::size_t>(gv.cols()) != p_dim ||
        (f_dim && *f_dim != static_cast<std::size_t>(gv.rows())))
      throw LayoutError("oracle returned an operator of the wrong shape");
    if (!f_dim) {
      f_dim = gv.rows();
      acc = Vector::Zero(p_dim * *f_dim * x.rows());
    }
    Vector gk = Eigen::Map<const Vector>(gv.data(), gv.size());
    acc += kron(Matrix(gk), x).col(0);
  }
  acc /= static_cast<double>(norm);
  return {ProcessLayout::standard(p_dim, *f_dim, parties), acc};
}

namespace {

struct PadPlan {
  std::vector<Factor> extra;
  std::vector<Role> extra_roles;
  // (past-like label, primed label) pairs joined by |id>>.
  std::vector<std::pair<std::string, std::string>> links;
};

PadPlan pad_plan(const ProcessLayout &l) {
  PadPlan plan;
  for (const auto &p : l.parties()) {
    if (p.d_in == p.d_out)
      continue;
    // A_I' ~ P_A has dimension d_out, A_O' ~ F_A has dimension d_in.
    if (p.d_out > 1) {
      plan.extra.push_back({"P_" + p.name, p.d_out});
      plan.extra_roles.push_back(Role::past());
      plan.extra.push_back({p.name + "_I'", p.d_out});
      plan.extra_roles.push_back(Role::input(p.name));
      plan.links.push_back({"P_" + p.name, p.name + "_I'"});
    }
    if (p.d_in > 1) {
      plan.extra.push_back({p.name + "_O'", p.d_in});
      plan.extra_roles.push_back(Role::output(p.name));
      plan.extra.push_back({"F_" + p.name, p.d_in});
      plan.extra_roles.push_back(Role::future());
      plan.links.push_back({p.name + "_O'", "F_" + p.name});
    }
  }
  return plan;
}

Vector identity_double_ket(std::size_t d) {
  Matrix id = Matrix::Identity(d, d);
  return Eigen::Map<const Vector>(id.data(), id.size());
}

} // namespace

ProcessVector pad_dimensions(const ProcessVector &w) {
  auto plan = pad_plan(w.layout);
  if (plan.extra.empty())
    return w;
  Matrix v = w.data;
  for (const auto &[a, b] : plan.links)
    v = kron(v, Matrix(identity_double_ket(std::find_if(plan.extra.begin(), plan.extra.end(),
                                                        [&](const Factor &f) {
                                                          return f.label == a;
                                                        })->dim)));
  auto f = w.layout.space().factors();
  auto r = w.layout.roles();
  f.insert(f.end(), plan.extra.begin(), plan.extra.end());
  r.insert(r.end(), plan.extra_roles.begin(), plan.extra_roles.end());
  return ProcessVector(ProcessLayout(SpaceLayout(f), r), v.col(0)).canonical();
}

ProcessMatrix pad_dimensions(const ProcessMatrix &w) {
  auto plan = pad_plan(w.layout);
  if (plan.extra.empty())
    return w;
  Matrix m = w.data;
  for (const auto &[a, b] : plan.links) {
    auto d = std::find_if(plan.extra.begin(), plan.extra.end(),
                          [&](const Factor &f) { return f.label == a; })->dim;
    Vector k = identity_double_ket(d);
    m = kron(m, Matrix(k * k.adjoint()));
  }
  auto f = w.layout.space().factors();
  auto r = w.layout.roles();
  f.insert(f.end(), plan.extra.begin(), plan.extra.end());
  r.insert(r.end(), plan.extra_roles.begin(), plan.extra_roles.end());
  return ProcessMatrix(ProcessLayout(SpaceLayout(f), r), m).canonical();
}

namespace {

void check_state(const Matrix &rho, std::size_t dp) {
  if (static_cast<std::size_t>(rho.rows()) != dp || rho.rows() != rho.cols())
    throw InvalidInput("state on P has wrong dimension");
  if ((rho - rho.adjoint()).norm() > 1e-9 || std::abs(rho.trace() - cplx(1.0)) > 1e-9)
    throw InvalidInput("state on P must be Hermitian with unit trace");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) < -1e-9)
    throw InvalidInput("state on P is not positive semidefinite");
}

} // namespace

ProcessMatrix reduced_process(const ProcessVector &w_in, const Matrix &rho_p, StateConvention conv) {
  auto w = w_in.canonical();
  const std::size_t dp = w.layout.p_dim(), df = w.layout.f_dim();
  check_state(rho_p, dp);
  const std::size_t dx = w.data.size() / (dp * df);
  Matrix rho = conv == StateConvention::Transposed ? Matrix(rho_p) : Matrix(rho_p.transpose());
  Matrix out = Matrix::Zero(dx, dx);
  Eigen::Map<const RowMatrix> wm(w.data.data(), dp * df, dx);
  for (std::size_t f = 0; f < df; ++f) {
    Matrix mf(dp, dx);
    for (std::size_t p = 0; p < dp; ++p)
      mf.row(p) = wm.row(p * df + f);
    out += mf.transpose() * rho * mf.conjugate();
  }
  return {w.layout.parties_only(), out};
}

ProcessMatrix reduced_process(const ProcessMatrix &w_in, const Matrix &rho_p, StateConvention conv) {
  auto w = w_in.canonical();
  const std::size_t dp = w.layout.p_dim(), df = w.layout.f_dim();
  check_state(rho_p, dp);
  Matrix rho = conv == StateConvention::Transposed ? Matrix(rho_p.transpose()) : Matrix(rho_p);
  const std::size_t dx = w.data.rows() / (dp * df);
  // out = sum_{p, p', f} rho(p, p') W[(p' f), (p f)]
  const auto n = static_cast<Eigen::Index>(dx);
  Matrix out = Matrix::Zero(n, n);
  for (std::size_t p = 0; p < dp; ++p)
    for (std::size_t q = 0; q < dp; ++q) {
      const cplx c = rho(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
      if (c == cplx(0.0))
        continue;
      for (std::size_t f = 0; f < df; ++f)
        out += c * w.data.block(static_cast<Eigen::Index>((q * df + f) * dx),
                                static_cast<Eigen::Index>((p * df + f) * dx), n, n);
    }
  return {w.layout.parties_only(), out};
}

} // namespace cframes
