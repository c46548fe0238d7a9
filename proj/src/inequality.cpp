/**
 * This code is part of causalframes.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "cframes/inequality.hpp"

#include <algorithm>
#include <atomic>
#include <future>
#include <limits>
#include <random>
#include <thread>

#include <Eigen/Eigenvalues>

namespace cframes {

namespace {

const cplx I{0.0, 1.0};

Matrix pauli(char c) {
  Matrix m(2, 2);
  switch (c) {
  case 'X':
    m << 0, 1, 1, 0;
    break;
  case 'Y':
    m << 0, -I, I, 0;
    break;
  default:
    m << 1, 0, 0, 1;
  }
  return m;
}

Matrix hermitian_part(const Matrix &m) { return 0.5 * (m + m.adjoint()); }

Matrix psd_clip(const Matrix &m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m));
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix out_trace(const Matrix &m, std::size_t d_in, std::size_t d_out) {
  Matrix r = Matrix::Zero(d_in, d_in);
  for (std::size_t i = 0; i < d_in; ++i)
    for (std::size_t j = 0; j < d_in; ++j)
      for (std::size_t o = 0; o < d_out; ++o)
        r(i, j) += m(i * d_out + o, j * d_out + o);
  return r;
}

Matrix inverse_sqrt(const Matrix &s) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(s));
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] <= 1e-14)
      throw NumericalError("instrument normalization is singular", ev[i]);
    ev[i] = 1.0 / std::sqrt(ev[i]);
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

// Makes sum_a tr_out M_a exactly the identity by a congruence.
void renormalize(std::vector<Matrix> &els, std::size_t d_in, std::size_t d_out) {
  Matrix s = Matrix::Zero(d_in, d_in);
  for (const auto &m : els)
    s += out_trace(m, d_in, d_out);
  Matrix t = kron(inverse_sqrt(s), Matrix::Identity(d_out, d_out));
  for (auto &m : els)
    m = hermitian_part(t * m * t);
}

// Dykstra projection onto {M_a psd} intersected with {sum_a tr_out M_a = id}.
std::vector<Matrix> project_instrument(std::vector<Matrix> x, std::size_t d_in, std::size_t d_out,
                                       std::size_t iterations) {
  const std::size_t n = x.size();
  const double denom = static_cast<double>(n * d_out);
  std::vector<Matrix> p(n, Matrix::Zero(x[0].rows(), x[0].cols()));
  std::vector<Matrix> q = p;
  const Matrix id_out = Matrix::Identity(d_out, d_out);
  for (std::size_t it = 0; it < iterations; ++it) {
    std::vector<Matrix> y(n);
    for (std::size_t a = 0; a < n; ++a) {
      y[a] = psd_clip(x[a] + p[a]);
      p[a] = x[a] + p[a] - y[a];
    }
    Matrix r = -Matrix::Identity(d_in, d_in);
    for (std::size_t a = 0; a < n; ++a)
      r += out_trace(y[a] + q[a], d_in, d_out);
    Matrix corr = kron(r, id_out) / denom;
    double change = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      Matrix nx = y[a] + q[a] - corr;
      q[a] = y[a] + q[a] - nx;
      change = std::max(change, (nx - x[a]).norm());
      x[a] = std::move(nx);
    }
    if (change < 1e-13)
      break;
  }
  for (auto &m : x)
    m = psd_clip(m);
  renormalize(x, d_in, d_out);
  return x;
}

double objective(const std::vector<std::vector<Matrix>> &c, const std::vector<Instrument> &m) {
  double v = 0.0;
  for (std::size_t x = 0; x < c.size(); ++x)
    for (std::size_t a = 0; a < c[x].size(); ++a)
      v += (c[x][a].cwiseProduct(m[x].elements[a].transpose())).sum().real();
  return v;
}

std::vector<std::size_t> block_dims(const ProcessLayout &l) {
  std::vector<std::size_t> d;
  for (const auto &p : l.parties())
    d.push_back(p.d_in * p.d_out);
  return d;
}

// tr over every block but k.
Matrix keep_block(const Matrix &x, const std::vector<std::size_t> &dims, std::size_t k) {
  std::size_t before = 1, after = 1;
  for (std::size_t j = 0; j < k; ++j)
    before *= dims[j];
  for (std::size_t j = k + 1; j < dims.size(); ++j)
    after *= dims[j];
  const std::size_t dk = dims[k];
  Matrix r = Matrix::Zero(dk, dk);
  for (std::size_t b = 0; b < before; ++b)
    for (std::size_t e = 0; e < after; ++e)
      for (std::size_t i = 0; i < dk; ++i)
        for (std::size_t j = 0; j < dk; ++j)
          r(i, j) += x((b * dk + i) * after + e, (b * dk + j) * after + e);
  return r;
}

} // namespace

StrategySpec paper_strategy() {
  const Matrix id = pauli('1'), x = pauli('X'), y = pauli('Y');
  const double s = 0.97926, t = 0.20258;
  Instrument zero{{0.5 * (kron(id, id) - 0.5 * kron(id, x) - 0.5 * kron(x, x)),
                   Matrix::Zero(4, 4)}};
  Instrument one{{0.25 * (kron(id, id) - s * kron(x, id) - t * kron(y, id)),
                  0.25 * (kron(id, id) + kron(id, x) + s * (kron(x, id) + kron(x, x)) +
                          t * (kron(y, id) + kron(y, x)))}};
  StrategySpec out;
  for (int k = 0; k < 3; ++k)
    out.parties.push_back({zero, one});
  return out;
}

std::vector<CorrelationTerm> i1_terms() {
  const auto any = CorrelationTensor::any;
  return {{1.0, {1, 1, any}, {1, 1, 0}},
          {1.0, {any, 1, 1}, {0, 1, 1}},
          {1.0, {1, any, 1}, {1, 0, 1}},
          {-1.0, {1, 1, 1}, {1, 1, 1}}};
}

double eval_I1(const CorrelationTensor &p) {
  if (p.parties() != 3)
    throw LayoutError("I1 needs three parties");
  for (std::size_t k = 0; k < 3; ++k)
    if (p.settings()[k] != 2 || p.outcomes()[k] != 2)
      throw LayoutError("I1 needs binary settings and outcomes");
  double v = 0.0;
  for (const auto &t : i1_terms())
    v += t.coefficient * p.marginal(t.outcomes, t.settings);
  return v;
}

StrategySpec random_strategy(const ProcessLayout &layout, Rng &rng) {
  StrategySpec s;
  for (const auto &p : layout.parties()) {
    const std::size_t d = p.d_in * p.d_out;
    std::vector<Instrument> per;
    for (int x = 0; x < 2; ++x) {
      std::vector<Matrix> els;
      for (int a = 0; a < 2; ++a) {
        Matrix g = ginibre(d, d, rng);
        els.push_back(g * g.adjoint());
      }
      renormalize(els, p.d_in, p.d_out);
      per.push_back({els});
    }
    s.parties.push_back(std::move(per));
  }
  return s;
}

std::vector<std::vector<Matrix>> party_coefficients(const ProcessMatrix &w, const StrategySpec &s,
                                                    std::size_t k,
                                                    const std::vector<CorrelationTerm> &terms) {
  const auto dims = block_dims(w.layout);
  const std::size_t n = dims.size();
  if (s.parties.size() != n || k >= n)
    throw LayoutError("strategy does not match the process");
  const Matrix wt = w.data.transpose();
  std::vector<std::vector<Matrix>> c(s.parties[k].size());
  for (std::size_t x = 0; x < c.size(); ++x)
    c[x].assign(s.parties[k][x].elements.size(), Matrix::Zero(dims[k], dims[k]));
  for (const auto &t : terms) {
    std::vector<Matrix> ops;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == k) {
        ops.push_back(Matrix::Identity(dims[j], dims[j]));
        continue;
      }
      const auto &el = s.parties[j].at(t.settings[j]).elements;
      if (t.outcomes[j] == CorrelationTensor::any) {
        Matrix sum = Matrix::Zero(dims[j], dims[j]);
        for (const auto &m : el)
          sum += m;
        ops.push_back(sum);
      } else {
        ops.push_back(el.at(t.outcomes[j]));
      }
    }
    Matrix r = t.coefficient * keep_block(wt * kron_all(ops), dims, k);
    auto &target = c.at(t.settings[k]);
    if (t.outcomes[k] == CorrelationTensor::any) {
      for (auto &m : target)
        m += r;
    } else {
      target.at(t.outcomes[k]) += r;
    }
  }
  return c;
}

std::vector<Instrument> solve_party(const std::vector<std::vector<Matrix>> &c,
                                    const std::vector<Instrument> &start, std::size_t d_in,
                                    std::size_t d_out, const SeesawConfig &cfg) {
  std::vector<Instrument> out = start;
  for (std::size_t x = 0; x < c.size(); ++x) {
    // tr[C M] = tr[H M] on Hermitian M, H the Hermitian part of C.
    std::vector<Matrix> grad;
    double scale = 0.0;
    for (const auto &m : c[x]) {
      grad.push_back(hermitian_part(m));
      scale = std::max(scale, m.norm());
    }
    if (scale == 0.0)
      continue;
    const double step = 1.0 / scale;
    std::vector<Matrix> cur = start[x].elements;
    for (std::size_t it = 0; it < cfg.inner_iterations; ++it) {
      std::vector<Matrix> trial(cur.size());
      for (std::size_t a = 0; a < cur.size(); ++a)
        trial[a] = cur[a] - step * grad[a];
      auto next = project_instrument(trial, d_in, d_out, cfg.projection_iterations);
      double change = 0.0;
      for (std::size_t a = 0; a < cur.size(); ++a)
        change = std::max(change, (next[a] - cur[a]).norm());
      cur = std::move(next);
      if (change < 1e-12)
        break;
    }
    out[x].elements = std::move(cur);
  }
  return out;
}

SeesawRun seesaw_run(const ProcessMatrix &w, StrategySpec start, const SeesawConfig &cfg) {
  const auto terms = i1_terms();
  const auto &parties = w.layout.parties();
  SeesawRun run;
  run.strategy = std::move(start);
  run.value = objective(party_coefficients(w, run.strategy, 0, terms), run.strategy.parties[0]);
  run.trace.push_back(run.value);
  for (std::size_t sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    const double before = run.value;
    for (std::size_t k = 0; k < parties.size(); ++k) {
      auto c = party_coefficients(w, run.strategy, k, terms);
      auto cand = solve_party(c, run.strategy.parties[k], parties[k].d_in, parties[k].d_out, cfg);
      const double v = objective(c, cand);
      if (v <= run.value) {
        run.strategy.parties[k] = std::move(cand);
        run.value = v;
      }
    }
    run.trace.push_back(run.value);
    if (before - run.value < cfg.convergence_tol) {
      run.converged = true;
      break;
    }
  }
  return run;
}

SeesawResult seesaw_optimize(const ProcessMatrix &w_in, const SeesawConfig &cfg) {
  if (cfg.restarts == 0 || cfg.max_sweeps == 0 || cfg.inner_iterations == 0 ||
      cfg.projection_iterations == 0 || !(cfg.convergence_tol > 0.0))
    throw InvalidInput("seesaw configuration entries must be positive");
  const ProcessMatrix w = w_in.canonical();
  if (w.layout.parties().size() != 3 || w.layout.p_dim() != 1 || w.layout.f_dim() != 1)
    throw LayoutError("seesaw expects a three-party reduced process");

  std::vector<StrategySpec> starts;
  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    if (r == 0 && cfg.initial) {
      starts.push_back(*cfg.initial);
      continue;
    }
    std::seed_seq seq{static_cast<std::uint64_t>(cfg.seed), static_cast<std::uint64_t>(r)};
    Rng rng(seq);
    starts.push_back(random_strategy(w.layout, rng));
  }

  std::vector<SeesawRun> runs(cfg.restarts);
  std::size_t workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, cfg.restarts);
  std::vector<std::future<void>> pending;
  std::atomic<std::size_t> next{0};
  for (std::size_t t = 0; t < workers; ++t)
    pending.push_back(std::async(std::launch::async, [&] {
      for (std::size_t r = next++; r < cfg.restarts; r = next++)
        runs[r] = seesaw_run(w, starts[r], cfg);
    }));
  for (auto &f : pending)
    f.get();

  SeesawResult res;
  res.value = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < runs.size(); ++r) {
    res.restart_values.push_back(runs[r].value);
    if (runs[r].value < res.value) {
      res.value = runs[r].value;
      res.best_restart = r;
    }
  }
  const auto &best = runs[res.best_restart];
  res.strategy = best.strategy;
  res.trace = best.trace;
  res.converged = best.converged;
  return res;
}

} // namespace cframes
