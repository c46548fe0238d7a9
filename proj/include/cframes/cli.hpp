/**
 * This code is part of causalframes.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef CFRAMES_CLI_HPP
#define CFRAMES_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

#include "cframes/io.hpp"

namespace cframes {

enum ExitCode { kExitPass = 0, kExitNumerical = 1, kExitUsage = 2 };

// Structured result of one command; `digest` hashes everything else.
struct RunReport {
  std::string command;
  std::vector<std::string> args;
  std::string inputs_digest;
  json results = json::object();
  json residuals = json::object();
  json checks = json::object(); // name -> bool
  std::uint64_t seed = 0;

  bool passed() const;
  json to_json() const;
};

// Default tolerance, overridden by CFRAMES_TOLERANCE.
double default_tolerance();

// Runs one invocation. The report goes to `out` as JSON, diagnostics to `err`.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace cframes

#endif
