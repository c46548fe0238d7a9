/**
 * This code is part of causalframes.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef CFRAMES_INEQUALITY_HPP
#define CFRAMES_INEQUALITY_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "cframes/instrument.hpp"
#include "cframes/random.hpp"

namespace cframes {

StrategySpec paper_strategy();

// I_1 = P_AB(11|110) + P_BC(11|011) + P_AC(11|101) - P_ABC(111|111); the
// pairwise terms sum over the third party's outcome.
double eval_I1(const CorrelationTensor &p);

// One term of a linear functional on correlations: outcome entries may be
// CorrelationTensor::any.
struct CorrelationTerm {
  double coefficient = 1.0;
  std::vector<std::size_t> outcomes;
  std::vector<std::size_t> settings;
};

std::vector<CorrelationTerm> i1_terms();

// Two binary-outcome instruments per party, random Choi elements.
StrategySpec random_strategy(const ProcessLayout &layout, Rng &rng);

struct SeesawConfig {
  std::size_t restarts = 20;
  std::size_t max_sweeps = 60;
  double convergence_tol = 1e-10;
  std::size_t inner_iterations = 400;
  std::size_t projection_iterations = 200;
  std::uint64_t seed = 1;
  std::size_t threads = 0; // 0: hardware concurrency
  std::optional<StrategySpec> initial; // replaces restart 0's random start
};

struct SeesawRun {
  StrategySpec strategy;
  double value = 0.0;
  std::vector<double> trace; // value before the first sweep, then after each
  bool converged = false;
};

struct SeesawResult {
  StrategySpec strategy;
  double value = 0.0;
  std::vector<double> trace;
  bool converged = false;
  std::size_t best_restart = 0;
  std::vector<double> restart_values;
};

// Coefficients C_{a|x} with objective = sum_{a,x} tr[C_{a|x} M_{a|x}] for
// party k, the others held at `s`. W is a reduced process on party factors.
std::vector<std::vector<Matrix>> party_coefficients(const ProcessMatrix &w, const StrategySpec &s,
                                                    std::size_t k,
                                                    const std::vector<CorrelationTerm> &terms);

// Minimizes sum tr[C_{a|x} M_{a|x}] over instruments with the given input
// and output dimensions, starting from `start`.
std::vector<Instrument> solve_party(const std::vector<std::vector<Matrix>> &c,
                                    const std::vector<Instrument> &start, std::size_t d_in,
                                    std::size_t d_out, const SeesawConfig &cfg);

SeesawRun seesaw_run(const ProcessMatrix &w, StrategySpec start, const SeesawConfig &cfg);
SeesawResult seesaw_optimize(const ProcessMatrix &w, const SeesawConfig &cfg);

} // namespace cframes

#endif
