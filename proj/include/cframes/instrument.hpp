/**
 * This code is part of causalframes.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef CFRAMES_INSTRUMENT_HPP
#define CFRAMES_INSTRUMENT_HPP

#include <vector>

#include "cframes/process.hpp"

namespace cframes {

// Choi operators M_{a|x} on in (x) out, one per outcome.
struct Instrument {
  std::vector<Matrix> elements;
};

// parties[k][x] is party k's instrument for setting x.
struct StrategySpec {
  std::vector<std::vector<Instrument>> parties;
};

class CorrelationTensor {
 public:
  CorrelationTensor() = default;
  CorrelationTensor(std::vector<std::size_t> settings, std::vector<std::size_t> outcomes);

  std::size_t parties() const { return settings_.size(); }
  const std::vector<std::size_t> &settings() const { return settings_; }
  const std::vector<std::size_t> &outcomes() const { return outcomes_; }

  double &at(const std::vector<std::size_t> &a, const std::vector<std::size_t> &x);
  double p(const std::vector<std::size_t> &a, const std::vector<std::size_t> &x) const;
  // Sum over outcomes of parties whose entry in `a` is `any`.
  static constexpr std::size_t any = static_cast<std::size_t>(-1);
  double marginal(const std::vector<std::size_t> &a, const std::vector<std::size_t> &x) const;

  double min_probability() const;
  double worst_normalization_residual() const;
  const std::vector<double> &raw() const { return probs_; }

 private:
  std::size_t index(const std::vector<std::size_t> &a, const std::vector<std::size_t> &x) const;
  std::vector<std::size_t> settings_, outcomes_;
  std::vector<double> probs_;
};

// Largest violation of PSD and normalization over all instruments.
double strategy_residual(const StrategySpec &s, const ProcessLayout &layout);

// p(a|x) = tr[W (rho_p^T (x) id_F (x) (x)_k M_{a_k|x_k}^T)].
CorrelationTensor correlations(const ProcessMatrix &w, const StrategySpec &s, const Matrix &rho_p,
                               double tol = kDefaultTolerance);
CorrelationTensor correlations(const ProcessVector &w, const StrategySpec &s, const Matrix &rho_p,
                               double tol = kDefaultTolerance);

} // namespace cframes

#endif
