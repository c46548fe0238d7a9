/**
 * This code is part of causalframes.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef CFRAMES_ERRORS_HPP
#define CFRAMES_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cframes {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inconsistent labels, roles or dimensions.
class LayoutError : public Error {
 public:
  using Error::Error;
};

// A numerical certificate failed; carries the offending residual.
class NumericalError : public Error {
 public:
  NumericalError(const std::string &what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

} // namespace cframes

#endif
