/**
 * This code is part of causalframes.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef CFRAMES_IO_HPP
#define CFRAMES_IO_HPP

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cframes/instrument.hpp"
#include "cframes/process.hpp"

namespace cframes {

using json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

struct ProcessFile {
  std::variant<ProcessVector, ProcessMatrix> process;
  std::optional<double> tolerance;
  json metadata = json::object();

  bool is_vector() const { return std::holds_alternative<ProcessVector>(process); }
  const ProcessVector &vector() const { return std::get<ProcessVector>(process); }
  const ProcessMatrix &matrix() const { return std::get<ProcessMatrix>(process); }
  ProcessMatrix as_matrix() const;
};

// Multiplies by the phase making the first nonzero amplitude real positive.
Vector normalize_global_phase(const Vector &v);

// [[re, im], ...]
json encode_complex(const Matrix &m);
json encode_complex(const Vector &v);
Vector decode_vector(const json &j, const std::string &where);
// Square matrix from a flat row-major list.
Matrix decode_square(const json &j, const std::string &where);

json process_to_json(const ProcessVector &w, const json &metadata = json::object());
json process_to_json(const ProcessMatrix &w, const json &metadata = json::object());
ProcessFile process_from_json(const json &j);

json strategy_to_json(const StrategySpec &s, const std::vector<std::string> &party_names);
StrategySpec strategy_from_json(const json &j, const std::vector<std::string> &party_names);

// {"unitaries": {"A": [[re, im], ...], ...}} in the given party order.
std::vector<Matrix> unitaries_from_json(const json &j, const std::vector<std::string> &names);
json unitaries_to_json(const std::vector<Matrix> &u, const std::vector<std::string> &names);

// {"state": [...]} (pure) or {"density": [...]} (flat row-major).
Matrix state_from_json(const json &j, std::size_t dim);

std::string read_text(const std::string &path);
json read_json(const std::string &path);
void write_json(const std::string &path, const json &j);

std::string sha256_hex(const std::string &bytes);

} // namespace cframes

#endif
