/**
 * This code is part of causalframes.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cframes/instrument.hpp"
#include "cframes/process.hpp"
#include "cframes/zoo.hpp"
#include "oracles.hpp"

using namespace cframes;

namespace {

// P -> F identity, A_O -> A_I identity.
ProcessVector self_loop() {
  auto l = ProcessLayout::standard(2, 2, {{"A", 2, 2}});
  Vector w = Vector::Zero(16);
  for (int p = 0; p < 2; ++p)
    for (int o = 0; o < 2; ++o)
      w[((p * 2 + p) * 2 + o) * 2 + o] = 1.0;
  return {l, w};
}

ProcessVector chain(std::uint64_t seed) {
  Rng rng(seed);
  return causal_chain({haar_unitary(4, rng), haar_unitary(4, rng), haar_unitary(4, rng)}, 2);
}

std::vector<Matrix> unitaries_for(const ProcessLayout &l, Rng &rng) {
  std::vector<Matrix> u;
  for (const auto &p : l.parties())
    u.push_back(haar_unitary(p.d_in, rng));
  return u;
}

Matrix pauli_x() { return (Matrix(2, 2) << 0, 1, 1, 0).finished(); }

} // namespace

TEST_CASE("layouts and roles") {
  auto l = ProcessLayout::standard(4, 4, {{"A", 2, 2}, {"B", 3, 1}});
  CHECK(l.space().labels() == std::vector<std::string>{"P", "F", "A_I", "A_O", "B_I", "B_O"});
  CHECK(l.p_dim() == 4);
  CHECK(l.parties()[1].d_in == 3);
  CHECK(l.party_index("B") == 1);
  CHECK(Role::parse("in:A") == Role::input("A"));
  CHECK(Role::output("B").str() == "out:B");
  CHECK_THROWS_AS(Role::parse("sideways"), Error);
  auto perm = l.permuted({"B_O", "A_I", "F", "P", "B_I", "A_O"});
  // parties keep their order of first appearance
  CHECK(perm.canonical_order() ==
        std::vector<std::string>{"P", "F", "B_I", "B_O", "A_I", "A_O"});
}

TEST_CASE("validity of zoo processes and counterexamples") {
  CHECK(validate(quantum_switch().w).verdict);
  CHECK(validate(bw_process()).verdict);
  CHECK(validate(bw_reverse()).verdict);
  CHECK(validate(chain(3)).verdict);
  CHECK(validate(ProcessMatrix::from_vector(quantum_switch().w)).verdict);

  auto bad = validate(self_loop());
  CHECK_FALSE(bad.verdict);
  CHECK_FALSE(bad.witness.empty());
  CHECK(bad.worst_normalization_residual > 0.1);
  CHECK_FALSE(validate(ProcessMatrix::from_vector(self_loop())).verdict);

  // Direct contraction: G(U) = tr(U) id, not unitary for traceless U.
  Matrix g = oracle::induced(self_loop().data, 2, 2, {pauli_x()});
  CHECK(oracle::max_abs(g) < 1e-15);
}

TEST_CASE("causally ordered product process is valid") {
  Rng rng(21);
  Matrix v = haar_unitary(2, rng);
  Vector kv = oracle::double_ket(v);
  Matrix rho = random_density(2, rng);
  Matrix w = oracle::kron(oracle::kron(kv * kv.adjoint(), rho), Matrix::Identity(2, 2));
  ProcessMatrix pm(ProcessLayout::standard(2, 2, {{"A", 2, 2}}), w);
  auto rep = validate(pm);
  CHECK(rep.verdict);
  CHECK(rep.psd_margin > -1e-12);
  CHECK(rep.tuples_checked > 1);
  // a non-Hermitian matrix is rejected
  Matrix nh = w;
  nh(0, 1) += 0.5;
  CHECK_THROWS(validate(ProcessMatrix(pm.layout, nh)));
}

TEST_CASE("cptp spanning set elements are cptp") {
  for (auto [di, dout] : {std::pair<std::size_t, std::size_t>{2, 2}, {2, 3}, {3, 1}}) {
    auto set = cptp_spanning_set(di, dout);
    CHECK(set.size() == 1 + di * di * (dout * dout - 1));
    for (const auto &j : set) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(j);
      CHECK(es.eigenvalues().minCoeff() > -1e-12);
      CHECK((oracle::trace_second(j, di, dout) - Matrix::Identity(di, di)).norm() < 1e-12);
    }
  }
}

TEST_CASE("purity") {
  auto sw = quantum_switch().w;
  auto r = is_pure(sw);
  CHECK(r.pure);
  REQUIRE(r.u_w.has_value());
  CHECK(unitarity_residual(r.u_w->data) < 1e-9);
  CHECK(is_pure(ProcessMatrix::from_vector(sw)).pure);
  CHECK(is_pure(bw_process()).pure);
  CHECK(is_pure(bw_reverse()).pure);

  auto w1 = chain(1), w2 = chain(2);
  Matrix mix = 0.5 * (w1.data * w1.data.adjoint() + w2.data * w2.data.adjoint());
  ProcessMatrix pm(w1.layout, mix);
  CHECK(validate(pm).verdict);
  auto m = is_pure(pm);
  CHECK_FALSE(m.pure);
  Eigen::SelfAdjointEigenSolver<Matrix> es(mix);
  const auto n = es.eigenvalues().size();
  CHECK(es.eigenvalues()[n - 2] > 1e-3 * es.eigenvalues()[n - 1]);
}

TEST_CASE("induced map of the switch") {
  auto w = quantum_switch().w;
  auto id = Matrix::Identity(2, 2);
  CHECK((induced_map(w, {id, id}).data - Matrix::Identity(4, 4)).norm() < 1e-12);
  Rng rng(4);
  for (int t = 0; t < 10; ++t) {
    Matrix ua = haar_unitary(2, rng), ub = haar_unitary(2, rng);
    Matrix expect = Matrix::Zero(4, 4);
    expect.topLeftCorner(2, 2) = ub * ua;
    expect.bottomRightCorner(2, 2) = ua * ub;
    auto g = induced_map(w, {ua, ub});
    CHECK((g.data - expect).norm() < 1e-10);
    CHECK((oracle::induced(w.canonical().data, 4, 4, {ua, ub}) - expect).norm() < 1e-10);
  }
  CHECK_THROWS(induced_map(w, {2.0 * id, id}));
  CHECK_THROWS(induced_map(w, {id}));
}

TEST_CASE("reverse process on repeated basis inputs") {
  auto w = bw_reverse();
  Rng rng(12);
  for (int t = 0; t < 5; ++t) {
    auto u = unitaries_for(w.layout, rng);
    Matrix g = induced_map(w, u).data;
    Matrix prod = kron_all(u);
    for (int i = 0; i < 2; ++i) {
      Vector e = Vector::Zero(8);
      e[i ? 7 : 0] = 1.0;
      CHECK((g * e - prod * e).norm() < 1e-12);
    }
  }
}

TEST_CASE("induced maps of zoo processes are unitary") {
  Rng rng(30);
  for (const auto &name : zoo_names()) {
    auto w = zoo_process(name);
    for (int t = 0; t < 20; ++t) {
      auto g = induced_map(w, unitaries_for(w.layout, rng));
      CHECK(unitarity_residual(g.data) < 1e-9);
    }
  }
}

TEST_CASE("reconstruction") {
  SUBCASE("identity process") {
    auto w = reconstruct_process([](const std::vector<Matrix> &u) { return u[0]; }, {{"A", 2, 2}}, 2);
    Vector expect = Vector::Zero(16);
    for (int p = 0; p < 2; ++p)
      for (int f = 0; f < 2; ++f)
        expect[((p * 2 + f) * 2 + p) * 2 + f] = 1.0;
    CHECK((w.data - expect).norm() < 1e-12);
  }
  SUBCASE("causal chain roundtrip") {
    Rng rng(40);
    Matrix v1 = haar_unitary(4, rng), v2 = haar_unitary(4, rng), v3 = haar_unitary(4, rng);
    auto g = [&](const std::vector<Matrix> &u) {
      Matrix id2 = Matrix::Identity(2, 2);
      return Matrix(v3 * oracle::kron(u[1], id2) * v2 * oracle::kron(u[0], id2) * v1);
    };
    auto w = reconstruct_process(g, {{"A", 2, 2}, {"B", 2, 2}}, 4);
    for (int t = 0; t < 10; ++t) {
      std::vector<Matrix> u{haar_unitary(2, rng), haar_unitary(2, rng)};
      CHECK((induced_map(w, u).data - g(u)).norm() < 1e-9);
    }
  }
  SUBCASE("basis independence and inversion") {
    Rng rng(41);
    auto sw = quantum_switch().w;
    auto oracle_g = [&](const std::vector<Matrix> &u) { return induced_map(sw, u).data; };
    std::vector<std::vector<Matrix>> bases{randomized_unitary_basis(2, rng),
                                           randomized_unitary_basis(2, rng)};
    auto other = reconstruct_process(oracle_g, {{"A", 2, 2}, {"B", 2, 2}}, 4, bases);
    CHECK(oracle::phase_distance(other.data, sw.data) < 1e-8);
    auto bw = bw_process();
    auto again = reconstruct_process([&](const std::vector<Matrix> &u) { return induced_map(bw, u).data; },
                                     {{"A", 2, 2}, {"B", 2, 2}, {"C", 2, 2}}, 8);
    CHECK(oracle::phase_distance(again.data, bw.data) < 1e-9);
  }
  SUBCASE("wrong oracle shape") {
    CHECK_THROWS(reconstruct_process([](const std::vector<Matrix> &) { return Matrix::Identity(3, 3); },
                                     {{"A", 2, 2}}, 2));
  }
}

TEST_CASE("dimension padding") {
  auto sw = quantum_switch().w;
  CHECK(pad_dimensions(sw).data == sw.data);
  // P -> A_I identity, one-dimensional A_O and F.
  auto l = ProcessLayout::standard(2, 1, {{"A", 2, 1}});
  Vector w = Vector::Zero(4);
  w[0] = 1.0;
  w[3] = 1.0;
  ProcessVector pv(l, w);
  CHECK(validate(pv).verdict);
  auto padded = pad_dimensions(pv);
  const auto &party = padded.layout.parties()[0];
  CHECK(party.d_in == 2);
  CHECK(party.d_out == 2);
  CHECK(validate(padded).verdict);
  CHECK(is_pure(padded).pure == is_pure(pv).pure);
  // tracing the added factors returns W times the link dimension
  ProcessMatrix pm = ProcessMatrix::from_vector(padded);
  std::vector<std::string> extra;
  for (const auto &f : padded.layout.space().factors())
    if (!l.space().contains(f.label))
      extra.push_back(f.label);
  auto traced = partial_trace(pm.labeled(), extra);
  auto back = permute(traced, l.space().labels(), l.space().labels());
  CHECK((back.data - 2.0 * pv.data * pv.data.adjoint()).norm() < 1e-12);
  auto pm_padded = pad_dimensions(ProcessMatrix::from_vector(pv));
  CHECK((pm_padded.canonical().data - pm.canonical().data).norm() < 1e-12);
}

TEST_CASE("reduced process of the reverse process") {
  auto wr = bw_reverse();
  Matrix rho = Matrix::Constant(8, 8, 1.0 / 8.0);
  auto red = reduced_process(wr, rho);
  // (1/8) sum_{u,v,x} |u><v|^I (x) |x+f(u)><x+f(v)|^O over interleaved factors
  auto fw = [](int u) {
    auto r = f_bw((u >> 2) & 1, (u >> 1) & 1, u & 1);
    return (r[0] << 2) | (r[1] << 1) | r[2];
  };
  auto idx = [](int in, int out) {
    int i = 0;
    for (int k = 2; k >= 0; --k)
      i = i * 4 + ((in >> k) & 1) * 2 + ((out >> k) & 1);
    return i;
  };
  Matrix expect = Matrix::Zero(64, 64);
  for (int u = 0; u < 8; ++u)
    for (int v = 0; v < 8; ++v)
      for (int x = 0; x < 8; ++x)
        expect(idx(u, x ^ fw(u)), idx(v, x ^ fw(v))) += 1.0 / 8.0;
  CHECK((red.data - expect).norm() < 1e-12);
  CHECK(validate(red).verdict);
  auto red_m = reduced_process(ProcessMatrix::from_vector(wr), rho);
  CHECK((red_m.data - red.data).norm() < 1e-12);

  // the two conventions differ only through rho^T
  Rng rng(2);
  Matrix r = random_density(8, rng);
  auto a = reduced_process(wr, r, StateConvention::Transposed);
  auto b = reduced_process(wr, Matrix(r.transpose()), StateConvention::Plain);
  CHECK((a.data - b.data).norm() < 1e-12);
  CHECK_THROWS(reduced_process(wr, Matrix::Identity(8, 8)));
}

TEST_CASE("basis-state input gives causal classical correlations") {
  auto wr = bw_reverse();
  Matrix rho = Matrix::Zero(8, 8);
  rho(0, 0) = 1.0;
  auto red = reduced_process(wr, rho);
  CHECK((red.data - Matrix(red.data.diagonal().asDiagonal())).norm() < 1e-14);
}

TEST_CASE("correlations") {
  Rng rng(50);
  SUBCASE("single-outcome instruments give probability one") {
    auto sw = quantum_switch().w;
    StrategySpec s;
    for (int k = 0; k < 2; ++k) {
      Matrix u = haar_unitary(2, rng);
      Vector ku = oracle::double_ket(u);
      s.parties.push_back({Instrument{{ku * ku.adjoint()}}});
    }
    auto p = correlations(sw, s, random_density(4, rng));
    CHECK(std::abs(p.p({0, 0}, {0, 0}) - 1.0) < 1e-10);
  }
  SUBCASE("switch with control zero orders B before A") {
    auto sw = quantum_switch().w;
    Matrix rho = Matrix::Zero(4, 4);
    rho(0, 0) = 1.0; // control |0>, target |0>
    StrategySpec s;
    // Alice: measure and reprepare in the computational basis.
    Instrument meas;
    for (int a = 0; a < 2; ++a) {
      Matrix m = Matrix::Zero(4, 4);
      m(a * 2 + a, a * 2 + a) = 1.0;
      meas.elements.push_back(m);
    }
    Vector kx = oracle::double_ket(pauli_x());
    s.parties.push_back({meas});
    s.parties.push_back({Instrument{{kx * kx.adjoint()}}});
    auto p = correlations(sw, s, rho);
    // control |0>: U_B U_A, Alice first, sees |0>
    CHECK(std::abs(p.p({0, 0}, {0, 0}) - 1.0) < 1e-10);
    rho.setZero();
    rho(2, 2) = 1.0; // control |1>: Bob first
    p = correlations(sw, s, rho);
    CHECK(std::abs(p.p({1, 0}, {0, 0}) - 1.0) < 1e-10);
  }
  SUBCASE("ill-formed instruments are rejected") {
    auto sw = quantum_switch().w;
    StrategySpec s;
    s.parties.push_back({Instrument{{Matrix::Identity(4, 4)}}});
    s.parties.push_back({Instrument{{Matrix::Identity(4, 4) * 0.5}}});
    CHECK_THROWS_AS(correlations(sw, s, Matrix::Identity(4, 4) / 4.0), InvalidInput);
  }
  SUBCASE("classical instruments on the classical process follow f") {
    auto w = bw_process();
    for (int trial = 0; trial < 30; ++trial) {
      // party k outputs g_k(input bit); outcome = input bit
      int g[3][2];
      for (auto &gk : g)
        for (int &v : gk)
          v = static_cast<int>(rng() % 2);
      StrategySpec s;
      for (int k = 0; k < 3; ++k) {
        Instrument inst;
        for (int a = 0; a < 2; ++a) {
          Matrix m = Matrix::Zero(4, 4);
          m(a * 2 + g[k][a], a * 2 + g[k][a]) = 1.0;
          inst.elements.push_back(m);
        }
        s.parties.push_back({inst});
      }
      const int y = static_cast<int>(rng() % 8);
      Matrix rho = Matrix::Zero(8, 8);
      rho(y, y) = 1.0;
      // fixed points i = y xor f(g(i)) by brute force
      int count = 0, fixed = -1;
      for (int i = 0; i < 8; ++i) {
        int o = (g[0][(i >> 2) & 1] << 2) | (g[1][(i >> 1) & 1] << 1) | g[2][i & 1];
        auto f = f_bw((o >> 2) & 1, (o >> 1) & 1, o & 1);
        int fi = (f[0] << 2) | (f[1] << 1) | f[2];
        if ((y ^ fi) == i) {
          ++count;
          fixed = i;
        }
      }
      REQUIRE(count == 1);
      auto p = correlations(w, s, rho);
      CHECK(std::abs(p.p({std::size_t((fixed >> 2) & 1), std::size_t((fixed >> 1) & 1),
                          std::size_t(fixed & 1)},
                         {0, 0, 0}) -
                     1.0) < 1e-10);
      CHECK(p.min_probability() > -1e-12);
      CHECK(p.worst_normalization_residual() < 1e-10);
    }
  }
}
