/**
 * This code is part of causalframes.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "cframes/instrument.hpp"

#include <algorithm>
#include <limits>

#include <Eigen/Eigenvalues>

namespace cframes {

CorrelationTensor::CorrelationTensor(std::vector<std::size_t> settings,
                                     std::vector<std::size_t> outcomes)
    : settings_(std::move(settings)), outcomes_(std::move(outcomes)) {
  if (settings_.size() != outcomes_.size())
    throw LayoutError("settings and outcomes arity differ");
  std::size_t n = 1;
  for (std::size_t k = 0; k < settings_.size(); ++k)
    n *= settings_[k] * outcomes_[k];
  probs_.assign(n, 0.0);
}

std::size_t CorrelationTensor::index(const std::vector<std::size_t> &a,
                                     const std::vector<std::size_t> &x) const {
  if (a.size() != parties() || x.size() != parties())
    throw LayoutError("correlation index has the wrong arity");
  std::size_t idx = 0;
  for (std::size_t k = 0; k < parties(); ++k) {
    if (x[k] >= settings_[k] || a[k] >= outcomes_[k])
      throw LayoutError("correlation index out of range");
    idx = idx * settings_[k] + x[k];
  }
  for (std::size_t k = 0; k < parties(); ++k)
    idx = idx * outcomes_[k] + a[k];
  return idx;
}

double &CorrelationTensor::at(const std::vector<std::size_t> &a, const std::vector<std::size_t> &x) {
  return probs_[index(a, x)];
}

double CorrelationTensor::p(const std::vector<std::size_t> &a,
                            const std::vector<std::size_t> &x) const {
  return probs_[index(a, x)];
}

double CorrelationTensor::marginal(const std::vector<std::size_t> &a,
                                   const std::vector<std::size_t> &x) const {
  auto it = std::find(a.begin(), a.end(), any);
  if (it == a.end())
    return p(a, x);
  const auto k = static_cast<std::size_t>(it - a.begin());
  double s = 0.0;
  auto b = a;
  for (std::size_t v = 0; v < outcomes_.at(k); ++v) {
    b[k] = v;
    s += marginal(b, x);
  }
  return s;
}

double CorrelationTensor::min_probability() const {
  return probs_.empty() ? 0.0 : *std::min_element(probs_.begin(), probs_.end());
}

double CorrelationTensor::worst_normalization_residual() const {
  std::size_t block = 1, count = 1;
  for (std::size_t k = 0; k < parties(); ++k) {
    block *= outcomes_[k];
    count *= settings_[k];
  }
  double worst = 0.0;
  for (std::size_t s = 0; s < count; ++s) {
    double sum = 0.0;
    for (std::size_t j = 0; j < block; ++j)
      sum += probs_[s * block + j];
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

namespace {

Matrix out_trace(const Matrix &m, std::size_t d_in, std::size_t d_out) {
  Matrix r = Matrix::Zero(d_in, d_in);
  for (std::size_t i = 0; i < d_in; ++i)
    for (std::size_t j = 0; j < d_in; ++j)
      for (std::size_t o = 0; o < d_out; ++o)
        r(i, j) += m(i * d_out + o, j * d_out + o);
  return r;
}

double min_eigenvalue(const Matrix &m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

} // namespace

double strategy_residual(const StrategySpec &s, const ProcessLayout &layout) {
  const auto &parties = layout.parties();
  if (s.parties.size() != parties.size())
    throw LayoutError("strategy has " + std::to_string(s.parties.size()) + " parties, layout has " +
                      std::to_string(parties.size()));
  double worst = 0.0;
  for (std::size_t k = 0; k < parties.size(); ++k) {
    const std::size_t di = parties[k].d_in, dout = parties[k].d_out;
    for (const auto &inst : s.parties[k]) {
      if (inst.elements.empty())
        throw LayoutError("instrument without elements for party " + parties[k].name);
      Matrix sum = Matrix::Zero(di * dout, di * dout);
      for (const auto &m : inst.elements) {
        if (static_cast<std::size_t>(m.rows()) != di * dout || m.rows() != m.cols())
          throw LayoutError("instrument element has the wrong shape for party " + parties[k].name);
        worst = std::max(worst, (m - m.adjoint()).norm());
        worst = std::max(worst, -min_eigenvalue(m));
        sum += m;
      }
      worst = std::max(worst, (out_trace(sum, di, dout) - Matrix::Identity(di, di)).norm());
    }
  }
  return worst;
}

namespace {

CorrelationTensor correlations_reduced(const ProcessMatrix &wred, const StrategySpec &s, double tol) {
  const double res = strategy_residual(s, wred.layout);
  if (res > tol)
    throw InvalidInput("ill-formed instruments (residual " + std::to_string(res) + ")");
  const std::size_t n = s.parties.size();
  std::vector<std::size_t> settings(n), outcomes(n);
  for (std::size_t k = 0; k < n; ++k) {
    settings[k] = s.parties[k].size();
    outcomes[k] = 0;
    for (const auto &inst : s.parties[k])
      outcomes[k] = std::max(outcomes[k], inst.elements.size());
  }
  CorrelationTensor out(settings, outcomes);
  std::vector<std::size_t> x(n, 0);
  while (true) {
    std::vector<std::size_t> a(n, 0);
    while (true) {
      bool present = true;
      std::vector<Matrix> ops;
      for (std::size_t k = 0; k < n && present; ++k) {
        const auto &el = s.parties[k][x[k]].elements;
        present = a[k] < el.size();
        if (present)
          ops.push_back(el[a[k]]);
      }
      if (present) {
        // tr[W M^T] = sum_ij W_ij M_ij
        Matrix m = kron_all(ops);
        out.at(a, x) = wred.data.cwiseProduct(m).sum().real();
      }
      std::size_t k = n;
      while (k > 0 && ++a[k - 1] == outcomes[k - 1])
        a[--k] = 0;
      if (k == 0)
        break;
    }
    std::size_t k = n;
    while (k > 0 && ++x[k - 1] == settings[k - 1])
      x[--k] = 0;
    if (k == 0)
      break;
  }
  return out;
}

} // namespace

CorrelationTensor correlations(const ProcessMatrix &w, const StrategySpec &s, const Matrix &rho_p,
                               double tol) {
  return correlations_reduced(reduced_process(w, rho_p).canonical(), s, tol);
}

CorrelationTensor correlations(const ProcessVector &w, const StrategySpec &s, const Matrix &rho_p,
                               double tol) {
  return correlations_reduced(reduced_process(w, rho_p).canonical(), s, tol);
}

} // namespace cframes
