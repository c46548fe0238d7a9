/**
 * This code is part of causalframes.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef CFRAMES_RANDOM_HPP
#define CFRAMES_RANDOM_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "cframes/tensor.hpp"

namespace cframes {

using Rng = std::mt19937_64;

Matrix ginibre(std::size_t rows, std::size_t cols, Rng &rng);
// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
Matrix haar_unitary(std::size_t d, Rng &rng);
Vector random_state(std::size_t d, Rng &rng);
Matrix random_density(std::size_t d, Rng &rng);
std::vector<Matrix> haar_unitaries(const std::vector<std::size_t> &dims, Rng &rng);

// {V U_i V'} for fixed Haar V, V'.
std::vector<Matrix> randomized_unitary_basis(std::size_t d, Rng &rng);

} // namespace cframes

#endif
