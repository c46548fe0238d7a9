/**
 * This code is part of causalframes.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "cframes/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/sha.h>

namespace cframes {

namespace {

InvalidInput bad(const std::string &where, const std::string &what) {
  return InvalidInput(where + ": " + what);
}

const json &member(const json &j, const std::string &key, const std::string &where) {
  if (!j.is_object() || !j.contains(key))
    throw bad(where, "missing key '" + key + "'");
  return j.at(key);
}

cplx decode_entry(const json &e, const std::string &where) {
  if (e.is_number())
    return {e.get<double>(), 0.0};
  if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
    throw bad(where, "expected a number or a [re, im] pair");
  return {e[0].get<double>(), e[1].get<double>()};
}

json layout_to_json(const ProcessLayout &l) {
  json out = json::array();
  for (std::size_t i = 0; i < l.space().size(); ++i)
    out.push_back({{"label", l.space()[i].label},
                   {"dim", l.space()[i].dim},
                   {"role", l.roles()[i].str()}});
  return out;
}

ProcessLayout layout_from_json(const json &j) {
  if (!j.is_array() || j.empty())
    throw bad("layout", "expected a non-empty array");
  std::vector<Factor> f;
  std::vector<Role> roles;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = "layout[" + std::to_string(i) + "]";
    const auto &e = j[i];
    const auto &label = member(e, "label", where);
    const auto &dim = member(e, "dim", where);
    const auto &role = member(e, "role", where);
    if (!label.is_string() || !dim.is_number_unsigned() || !role.is_string())
      throw bad(where, "label must be a string, dim a positive integer, role a string");
    if (dim.get<std::size_t>() == 0)
      throw bad(where, "dim must be positive");
    f.push_back({label.get<std::string>(), dim.get<std::size_t>()});
    try {
      roles.push_back(Role::parse(role.get<std::string>()));
    } catch (const Error &err) {
      throw bad(where, err.what());
    }
  }
  try {
    return ProcessLayout(SpaceLayout(f), roles);
  } catch (const Error &err) {
    throw bad("layout", err.what());
  }
}

} // namespace

ProcessMatrix ProcessFile::as_matrix() const {
  return is_vector() ? ProcessMatrix::from_vector(vector()) : matrix();
}

Vector normalize_global_phase(const Vector &v) {
  const double scale = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const cplx a = v[i];
    if (std::abs(a) > 1e-12 * scale) {
      if (a.imag() == 0.0 && a.real() > 0.0)
        return v;
      Vector out = v * (std::conj(a) / std::abs(a));
      out[i] = std::abs(a);
      return out;
    }
  }
  return v;
}

json encode_complex(const Matrix &m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      out.push_back({m(r, c).real(), m(r, c).imag()});
  return out;
}

json encode_complex(const Vector &v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out.push_back({v[i].real(), v[i].imag()});
  return out;
}

Vector decode_vector(const json &j, const std::string &where) {
  if (!j.is_array())
    throw bad(where, "expected an array of [re, im] pairs");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = decode_entry(j[i], where + "[" + std::to_string(i) + "]");
  return v;
}

Matrix decode_square(const json &j, const std::string &where) {
  Vector v = decode_vector(j, where);
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (n * n != v.size() || n == 0)
    throw bad(where, "length " + std::to_string(v.size()) + " is not a square");
  Matrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c)
      m(r, c) = v[r * n + c];
  return m;
}

json process_to_json(const ProcessVector &w, const json &metadata) {
  return {{"format_version", kFormatVersion},
          {"kind", "vector"},
          {"layout", layout_to_json(w.layout)},
          {"data", encode_complex(normalize_global_phase(w.data))},
          {"metadata", metadata}};
}

json process_to_json(const ProcessMatrix &w, const json &metadata) {
  return {{"format_version", kFormatVersion},
          {"kind", "matrix"},
          {"layout", layout_to_json(w.layout)},
          {"data", encode_complex(w.data)},
          {"metadata", metadata}};
}

ProcessFile process_from_json(const json &j) {
  const auto &version = member(j, "format_version", "process file");
  if (!version.is_number_integer() || version.get<int>() != kFormatVersion)
    throw bad("format_version", "unsupported version " + version.dump());
  const auto &kind = member(j, "kind", "process file");
  ProcessLayout layout = layout_from_json(member(j, "layout", "process file"));
  const std::size_t n = layout.space().total_dim();
  Vector data = decode_vector(member(j, "data", "process file"), "data");
  ProcessFile out;
  if (kind == "vector") {
    if (static_cast<std::size_t>(data.size()) != n)
      throw bad("data", "expected " + std::to_string(n) + " amplitudes, got " +
                            std::to_string(data.size()));
    if (layout.past_labels().empty() || layout.future_labels().empty())
      throw bad("layout", "a process vector needs P and F roles");
    out.process = ProcessVector(layout, data);
  } else if (kind == "matrix") {
    if (static_cast<std::size_t>(data.size()) != n * n)
      throw bad("data", "expected " + std::to_string(n * n) + " entries, got " +
                            std::to_string(data.size()));
    Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            data[static_cast<Eigen::Index>(r * n + c)];
    out.process = ProcessMatrix(layout, m);
  } else {
    throw bad("kind", "expected \"vector\" or \"matrix\"");
  }
  if (j.contains("tolerance")) {
    if (!j["tolerance"].is_number() || !(j["tolerance"].get<double>() > 0.0))
      throw bad("tolerance", "expected a positive number");
    out.tolerance = j["tolerance"].get<double>();
  }
  if (j.contains("metadata"))
    out.metadata = j["metadata"];
  return out;
}

json strategy_to_json(const StrategySpec &s, const std::vector<std::string> &party_names) {
  if (party_names.size() != s.parties.size())
    throw LayoutError("party names do not match the strategy");
  json parties = json::object();
  for (std::size_t k = 0; k < s.parties.size(); ++k) {
    json settings = json::object();
    for (std::size_t x = 0; x < s.parties[k].size(); ++x) {
      json outcomes = json::object();
      for (std::size_t a = 0; a < s.parties[k][x].elements.size(); ++a)
        outcomes[std::to_string(a)] = encode_complex(s.parties[k][x].elements[a]);
      settings[std::to_string(x)] = outcomes;
    }
    parties[party_names[k]] = settings;
  }
  return {{"format_version", kFormatVersion}, {"kind", "strategy"}, {"parties", parties}};
}

StrategySpec strategy_from_json(const json &j, const std::vector<std::string> &party_names) {
  const auto &parties = member(j, "parties", "strategy file");
  StrategySpec s;
  for (const auto &name : party_names) {
    const auto &settings = member(parties, name, "parties");
    std::vector<Instrument> per;
    for (std::size_t x = 0; settings.contains(std::to_string(x)); ++x) {
      const auto &outcomes = settings[std::to_string(x)];
      Instrument inst;
      for (std::size_t a = 0; outcomes.contains(std::to_string(a)); ++a)
        inst.elements.push_back(decode_square(outcomes[std::to_string(a)],
                                              "parties." + name + "." + std::to_string(x) + "." +
                                                  std::to_string(a)));
      if (inst.elements.empty())
        throw bad("parties." + name + "." + std::to_string(x), "no outcomes");
      per.push_back(std::move(inst));
    }
    if (per.empty())
      throw bad("parties." + name, "no settings");
    s.parties.push_back(std::move(per));
  }
  return s;
}

std::vector<Matrix> unitaries_from_json(const json &j, const std::vector<std::string> &names) {
  const auto &u = member(j, "unitaries", "unitaries file");
  std::vector<Matrix> out;
  for (const auto &n : names)
    out.push_back(decode_square(member(u, n, "unitaries"), "unitaries." + n));
  return out;
}

json unitaries_to_json(const std::vector<Matrix> &u, const std::vector<std::string> &names) {
  json m = json::object();
  for (std::size_t k = 0; k < u.size(); ++k)
    m[names.at(k)] = encode_complex(u[k]);
  return {{"unitaries", m}};
}

Matrix state_from_json(const json &j, std::size_t dim) {
  Matrix rho;
  if (j.contains("state")) {
    Vector v = decode_vector(j["state"], "state");
    if (static_cast<std::size_t>(v.size()) != dim)
      throw bad("state", "expected dimension " + std::to_string(dim));
    const double n = v.norm();
    if (n == 0.0)
      throw bad("state", "zero vector");
    v /= n;
    rho = v * v.adjoint();
  } else if (j.contains("density")) {
    rho = decode_square(j["density"], "density");
    if (static_cast<std::size_t>(rho.rows()) != dim)
      throw bad("density", "expected dimension " + std::to_string(dim));
  } else {
    throw bad("state file", "needs 'state' or 'density'");
  }
  return rho;
}

std::string read_text(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw InvalidInput(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const std::string &path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error &e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

void write_json(const std::string &path, const json &j) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw InvalidInput(path + ": cannot write");
  out << j.dump(1) << '\n';
}

std::string sha256_hex(const std::string &bytes) {
  unsigned char digest[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char *>(bytes.data()), bytes.size(), digest);
  std::ostringstream os;
  for (unsigned char b : digest)
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(b);
  return os.str();
}

} // namespace cframes
