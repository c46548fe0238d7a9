/**
 * This code is part of causalframes.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "cframes/cli.hpp"

#include <cstdlib>
#include <functional>
#include <sstream>

#include <CLI11.hpp>

#include "cframes/frames.hpp"
#include "cframes/gravity.hpp"
#include "cframes/inequality.hpp"
#include "cframes/zoo.hpp"

namespace cframes {

bool RunReport::passed() const {
  for (const auto &[name, ok] : checks.items())
    if (!ok.get<bool>())
      return false;
  return true;
}

json RunReport::to_json() const {
  json j{{"command", command}, {"args", args},       {"inputs_digest", inputs_digest},
         {"seed", seed},       {"results", results}, {"residuals", residuals},
         {"checks", checks},   {"pass", passed()}};
  j["digest"] = sha256_hex(j.dump());
  return j;
}

double default_tolerance() {
  if (const char *env = std::getenv("CFRAMES_TOLERANCE")) {
    char *end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0))
      throw InvalidInput(std::string("CFRAMES_TOLERANCE: not a positive number: ") + env);
    return v;
  }
  return kDefaultTolerance;
}

namespace {

struct Inputs {
  std::string bytes;
  json load(const std::string &path) {
    std::string text = read_text(path);
    bytes += sha256_hex(text);
    try {
      return json::parse(text);
    } catch (const json::parse_error &e) {
      throw InvalidInput(path + ": " + e.what());
    }
  }
};

std::vector<std::string> party_names(const ProcessLayout &l) {
  std::vector<std::string> out;
  for (const auto &p : l.parties())
    out.push_back(p.name);
  return out;
}

Matrix uniform_state(std::size_t d) {
  return Matrix::Constant(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d),
                          1.0 / static_cast<double>(d));
}

// Reduced process on party factors; a pure P input defaults to the uniform
// superposition.
ProcessMatrix reduce(const ProcessFile &pf, const std::optional<Matrix> &rho) {
  const ProcessLayout &l = pf.is_vector() ? pf.vector().layout : pf.matrix().layout;
  const std::size_t dp = l.p_dim();
  const Matrix r = rho ? *rho : uniform_state(dp);
  return pf.is_vector() ? reduced_process(pf.vector(), r) : reduced_process(pf.matrix(), r);
}

StrategySpec load_strategy(const std::string &arg, Inputs &in, const ProcessLayout &l) {
  if (arg == "paper")
    return paper_strategy();
  return strategy_from_json(in.load(arg), party_names(l));
}

json correlations_json(const CorrelationTensor &p) {
  json table = json::array();
  std::vector<std::size_t> x(p.parties(), 0);
  const auto &raw = p.raw();
  std::size_t idx = 0;
  std::size_t count = 1, block = 1;
  for (std::size_t k = 0; k < p.parties(); ++k) {
    count *= p.settings()[k];
    block *= p.outcomes()[k];
  }
  for (std::size_t s = 0; s < count; ++s) {
    std::vector<std::size_t> xs(p.parties());
    std::size_t rem = s;
    for (std::size_t k = p.parties(); k-- > 0;) {
      xs[k] = rem % p.settings()[k];
      rem /= p.settings()[k];
    }
    for (std::size_t o = 0; o < block; ++o, ++idx) {
      std::vector<std::size_t> as(p.parties());
      std::size_t r2 = o;
      for (std::size_t k = p.parties(); k-- > 0;) {
        as[k] = r2 % p.outcomes()[k];
        r2 /= p.outcomes()[k];
      }
      table.push_back({{"x", xs}, {"a", as}, {"p", raw[idx]}});
    }
  }
  return table;
}

json matrix_json(const Matrix &m) {
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", encode_complex(m)}};
}

struct Options {
  std::string file, out_file, party, fixed, unitaries, strategy = "paper", state, name, init;
  std::size_t samples = 20, restarts = 20, sweeps = 60;
  std::uint64_t seed = 1;
  double mass = 5.972e24, radius = 6.371e6, height = 1.0, tau = 1.0;
  bool search = false;
  std::optional<double> tol;
};

double tolerance_for(const Options &o, const std::optional<double> &file_tol) {
  if (o.tol)
    return *o.tol;
  if (file_tol)
    return *file_tol;
  return default_tolerance();
}

void cmd_validate(const Options &o, Inputs &in, RunReport &r) {
  auto pf = process_from_json(in.load(o.file));
  const double tol = tolerance_for(o, pf.tolerance);
  auto rep = pf.is_vector() ? validate(pf.vector(), tol) : validate(pf.matrix(), tol);
  r.results = {{"verdict", rep.verdict},
               {"witness", rep.witness},
               {"tuples_checked", rep.tuples_checked},
               {"tolerance", tol}};
  r.residuals = {{"psd_margin", rep.psd_margin},
                 {"normalization", rep.worst_normalization_residual}};
  r.checks["valid"] = rep.verdict;
}

void cmd_purity(const Options &o, Inputs &in, RunReport &r) {
  auto pf = process_from_json(in.load(o.file));
  const double tol = tolerance_for(o, pf.tolerance);
  auto rep = pf.is_vector() ? is_pure(pf.vector(), tol) : is_pure(pf.matrix(), tol);
  r.results = {{"pure", rep.pure}, {"rank_ratio", rep.rank_ratio}, {"tolerance", tol}};
  r.residuals = {{"unitarity", rep.unitarity_residual}};
  r.checks["pure"] = rep.pure;
}

const ProcessVector &need_vector(const ProcessFile &pf, const std::string &cmd) {
  if (!pf.is_vector())
    throw InvalidInput(cmd + " needs a process vector file");
  return pf.vector();
}

void cmd_induced(const Options &o, Inputs &in, RunReport &r) {
  auto pf = process_from_json(in.load(o.file));
  const auto &w = need_vector(pf, "induced");
  const double tol = tolerance_for(o, pf.tolerance);
  auto u = unitaries_from_json(in.load(o.unitaries), party_names(w.layout));
  auto g = induced_map(w, u, tol);
  const double res = unitarity_residual(g.data);
  r.results = {{"map", matrix_json(g.data)}};
  r.residuals = {{"unitarity", res}};
  r.checks["unitary"] = res <= tol;
}

void cmd_frames(const Options &o, Inputs &in, RunReport &r) {
  auto pf = process_from_json(in.load(o.file));
  const auto &w = need_vector(pf, "frames");
  std::vector<std::string> others;
  for (const auto &n : party_names(w.layout))
    if (n != o.party)
      others.push_back(n);
  w.layout.party_index(o.party);
  std::vector<Matrix> fixed;
  if (!others.empty())
    fixed = unitaries_from_json(in.load(o.fixed), others);
  MarcusOptions mo;
  mo.seed = o.seed;
  auto f = extract_frame(w, o.party, fixed, mo);
  r.results = {{"party", o.party},
               {"env_dim", f.env_dim},
               {"pi", matrix_json(f.pi_op.data)},
               {"phi", matrix_json(f.phi_op.data)}};
  r.residuals = {{"product", f.residual}};
  r.checks["decomposition"] = f.residual <= 1e-8;
}

void cmd_consistency(const Options &o, Inputs &in, RunReport &r) {
  auto pf = process_from_json(in.load(o.file));
  const auto &w = need_vector(pf, "consistency");
  std::vector<FrameGenerator> gens;
  std::vector<std::size_t> dims;
  MarcusOptions mo;
  mo.seed = o.seed;
  for (const auto &p : w.layout.parties()) {
    gens.push_back(process_frame_generator(w, p.name, mo));
    dims.push_back(p.d_in);
  }
  auto rep = check_consistency(gens, dims, o.samples, o.seed, 1e-8);
  r.results = {{"consistent", rep.consistent}, {"samples", o.samples}};
  r.residuals = {{"max", rep.max_residual}};
  r.checks["consistent"] = rep.consistent;
}

void cmd_reverse(const Options &o, Inputs &in, RunReport &r) {
  auto pf = process_from_json(in.load(o.file));
  auto rev = time_reverse(need_vector(pf, "reverse"));
  write_json(o.out_file, process_to_json(rev, pf.metadata));
  r.results = {{"written", o.out_file}};
  r.checks["written"] = true;
}

std::optional<Matrix> load_state(const Options &o, Inputs &in, const ProcessFile &pf) {
  if (o.state.empty())
    return std::nullopt;
  const ProcessLayout &l = pf.is_vector() ? pf.vector().layout : pf.matrix().layout;
  return state_from_json(in.load(o.state), l.p_dim());
}

void cmd_probs(const Options &o, Inputs &in, RunReport &r) {
  auto pf = process_from_json(in.load(o.file));
  const double tol = tolerance_for(o, pf.tolerance);
  auto wred = reduce(pf, load_state(o, in, pf));
  auto s = load_strategy(o.strategy, in, wred.layout);
  auto p = correlations(wred, s, Matrix::Identity(1, 1), std::max(tol, 1e-8));
  r.results = {{"correlations", correlations_json(p)}};
  r.residuals = {{"normalization", p.worst_normalization_residual()},
                 {"min_probability", p.min_probability()}};
  r.checks["normalized"] = p.worst_normalization_residual() <= std::max(tol, 1e-8);
}

void cmd_inequality(const Options &o, Inputs &in, RunReport &r) {
  auto pf = process_from_json(in.load(o.file));
  const double tol = tolerance_for(o, pf.tolerance);
  auto wred = reduce(pf, load_state(o, in, pf));
  auto s = load_strategy(o.strategy, in, wred.layout);
  auto p = correlations(wred, s, Matrix::Identity(1, 1), std::max(tol, 1e-8));
  const double v = eval_I1(p);
  r.results = {{"I1", v}, {"violation", v < 0.0}};
  r.residuals = {{"normalization", p.worst_normalization_residual()}};
  r.checks["normalized"] = p.worst_normalization_residual() <= std::max(tol, 1e-8);
}

void cmd_seesaw(const Options &o, Inputs &in, RunReport &r) {
  auto pf = process_from_json(in.load(o.file));
  auto wred = reduce(pf, load_state(o, in, pf));
  SeesawConfig cfg;
  cfg.restarts = o.restarts;
  cfg.seed = o.seed;
  cfg.max_sweeps = o.sweeps;
  if (!o.init.empty())
    cfg.initial = load_strategy(o.init, in, wred.layout);
  auto res = seesaw_optimize(wred, cfg);
  double worst_increase = 0.0;
  for (std::size_t i = 1; i < res.trace.size(); ++i)
    worst_increase = std::max(worst_increase, res.trace[i] - res.trace[i - 1]);
  r.results = {{"value", res.value},
               {"best_restart", res.best_restart},
               {"restart_values", res.restart_values},
               {"trace", res.trace},
               {"converged", res.converged},
               {"strategy", strategy_to_json(res.strategy, party_names(wred.layout))}};
  r.residuals = {{"trace_increase", worst_increase}};
  r.checks["monotone"] = worst_increase <= 1e-9;
}

void cmd_zoo(const Options &o, Inputs &, RunReport &r) {
  if (o.name == "list") {
    r.results = {{"processes", zoo_names()}};
    return;
  }
  auto w = zoo_process(o.name);
  if (o.out_file.empty())
    throw InvalidInput("zoo: -o <file> is required");
  write_json(o.out_file, process_to_json(w, {{"zoo", o.name}}));
  r.results = {{"name", o.name}, {"written", o.out_file}, {"dim", w.data.size()}};
  r.checks["written"] = true;
}

json event_json(const CoordEvent &e, const std::string &party) {
  return {{"party", party}, {"branch", e.branch}, {"t", e.t}, {"z", e.z}};
}

void cmd_gravity(const Options &o, Inputs &, RunReport &r) {
  SchwarzschildParams p;
  double tau = o.tau;
  if (o.search) {
    auto pt = find_switch_point();
    if (!pt)
      throw NumericalError("no switch-realizing parameter point found", 1.0);
    p = pt->params;
    tau = pt->tau_star;
  } else {
    p.mass = o.mass;
    p.radius = o.radius;
    p.height = o.height;
  }
  p.check();
  auto [o1, o2] = causal_order(tau, p);
  json events = json::array();
  for (int b : {1, 2}) {
    events.push_back(event_json(worldline_event(Party::A, tau, b, p), "A"));
    events.push_back(event_json(worldline_event(Party::B, tau, b, p), "B"));
  }
  const double closed = light_travel_time(0.0, p.height, 1, p);
  const double quad = light_travel_time_quadrature(0.0, p.height, 1, p);
  r.results = {{"params",
                {{"mass", p.mass}, {"radius", p.radius}, {"height", p.height}, {"G", p.G}, {"c", p.c}}},
               {"tau_star", tau},
               {"branch1", to_string(o1)},
               {"branch2", to_string(o2)},
               {"events", events},
               {"light_time", {{"branch1", closed}, {"branch2", light_travel_time(0.0, p.height, 2, p)}}}};
  r.residuals = {{"quadrature_relative", std::abs(closed - quad) / closed}};
  r.checks["quadrature"] = std::abs(closed - quad) <= 1e-12 * closed;
  if (o.search) {
    r.checks["switch_orders"] = o1 == Order::BeforeA && o2 == Order::BeforeB;
    if (!o.out_file.empty())
      write_json(o.out_file, r.results);
  }
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"cframes: causal reference frames and pure process matrices"};
  app.require_subcommand(1);
  Options o;
  double tol_value = 0.0;
  auto add_tol = [&](CLI::App *s) {
    s->add_option("--tol", tol_value, "numerical tolerance (overrides file and environment)");
  };
  using Handler = std::function<void(const Options &, Inputs &, RunReport &)>;
  std::vector<std::pair<CLI::App *, Handler>> handlers;
  auto sub = [&](const std::string &name, const std::string &help, Handler h) {
    auto *s = app.add_subcommand(name, help);
    add_tol(s);
    handlers.emplace_back(s, std::move(h));
    return s;
  };

  auto *s = sub("validate", "certify a process file", cmd_validate);
  s->add_option("file", o.file)->required();
  s = sub("purity", "test purity and extract U_w", cmd_purity);
  s->add_option("file", o.file)->required();
  s = sub("induced", "induced map on given unitaries", cmd_induced);
  s->add_option("file", o.file)->required();
  s->add_option("--unitaries", o.unitaries)->required();
  s = sub("frames", "causal reference frame of one party", cmd_frames);
  s->add_option("file", o.file)->required();
  s->add_option("--party", o.party)->required();
  s->add_option("--fixed", o.fixed, "unitaries of the other parties");
  s->add_option("--seed", o.seed);
  s = sub("consistency", "consistency of all parties' frames", cmd_consistency);
  s->add_option("file", o.file)->required();
  s->add_option("--samples", o.samples);
  s->add_option("--seed", o.seed);
  s = sub("reverse", "time reversal", cmd_reverse);
  s->add_option("file", o.file)->required();
  s->add_option("-o,--output", o.out_file)->required();
  s = sub("probs", "outcome correlations", cmd_probs);
  s->add_option("file", o.file)->required();
  s->add_option("--strategy", o.strategy, "strategy file or 'paper'");
  s->add_option("--state", o.state, "state on P (default: uniform superposition)");
  s = sub("inequality", "evaluate I1", cmd_inequality);
  s->add_option("file", o.file)->required();
  s->add_option("--strategy", o.strategy, "strategy file or 'paper'");
  s->add_option("--state", o.state, "state on P (default: uniform superposition)");
  s = sub("seesaw", "seesaw minimization of I1", cmd_seesaw);
  s->add_option("file", o.file)->required();
  s->add_option("--restarts", o.restarts);
  s->add_option("--seed", o.seed);
  s->add_option("--sweeps", o.sweeps);
  s->add_option("--state", o.state);
  s->add_option("--init", o.init, "strategy file or 'paper' for restart 0");
  s = sub("zoo", "export a named process ('list' to enumerate)", cmd_zoo);
  s->add_option("name", o.name)->required();
  s->add_option("-o,--output", o.out_file);
  s = sub("gravity", "gravitational switch coordinates", cmd_gravity);
  s->add_option("--mass", o.mass);
  s->add_option("--radius", o.radius);
  s->add_option("--height", o.height);
  s->add_option("--tau", o.tau);
  s->add_flag("--search", o.search, "search for a switch-realizing point");
  s->add_option("-o,--output", o.out_file, "fixture written by --search");

  std::vector<std::string> argv_store{"cframes"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char *> argv;
  for (auto &a : argv_store)
    argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError &e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  for (auto &[cmd, handler] : handlers) {
    if (!cmd->parsed())
      continue;
    if (cmd->count("--tol"))
      o.tol = tol_value;
    RunReport r;
    r.command = cmd->get_name();
    r.args = args;
    r.seed = o.seed;
    Inputs in;
    try {
      handler(o, in, r);
    } catch (const NumericalError &e) {
      err << "numerical failure: " << e.what() << '\n';
      return kExitNumerical;
    } catch (const Error &e) {
      err << "input error: " << e.what() << '\n';
      return kExitUsage;
    } catch (const json::exception &e) {
      err << "input error: " << e.what() << '\n';
      return kExitUsage;
    }
    std::string joined;
    for (const auto &a : args)
      joined += a + '\0';
    r.inputs_digest = sha256_hex(joined + in.bytes);
    out << r.to_json().dump(1) << '\n';
    return r.passed() ? kExitPass : kExitNumerical;
  }
  return kExitUsage;
}

} // namespace cframes
