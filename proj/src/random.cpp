/**
 * This code is part of causalframes.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "cframes/random.hpp"

#include <cmath>

namespace cframes {

Matrix ginibre(std::size_t rows, std::size_t cols, Rng &rng) {
  std::normal_distribution<double> n(0.0, 1.0 / std::sqrt(2.0));
  Matrix g(rows, cols);
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    for (Eigen::Index i = 0; i < g.rows(); ++i)
      g(i, j) = cplx(n(rng), n(rng));
  return g;
}

Matrix haar_unitary(std::size_t d, Rng &rng) {
  Eigen::HouseholderQR<Matrix> qr(ginibre(d, d, rng));
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (std::size_t k = 0; k < d; ++k) {
    cplx z = r(k, k);
    q.col(k) *= std::abs(z) > 0 ? z / std::abs(z) : cplx(1.0);
  }
  return q;
}

Vector random_state(std::size_t d, Rng &rng) {
  Vector v = ginibre(d, 1, rng).col(0);
  return v / v.norm();
}

Matrix random_density(std::size_t d, Rng &rng) {
  Matrix g = ginibre(d, d, rng);
  Matrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

std::vector<Matrix> haar_unitaries(const std::vector<std::size_t> &dims, Rng &rng) {
  std::vector<Matrix> out;
  for (auto d : dims)
    out.push_back(haar_unitary(d, rng));
  return out;
}

std::vector<Matrix> randomized_unitary_basis(std::size_t d, Rng &rng) {
  Matrix v = haar_unitary(d, rng), w = haar_unitary(d, rng);
  auto basis = unitary_basis(d);
  for (auto &u : basis)
    u = v * u * w;
  return basis;
}

} // namespace cframes
