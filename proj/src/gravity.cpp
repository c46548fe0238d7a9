/**
 * This code is part of causalframes.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "cframes/gravity.hpp"

#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cframes/errors.hpp"
#include "cframes/zoo.hpp"

namespace cframes {

double SchwarzschildParams::f(double r) const { return 1.0 - rs() / r; }

void SchwarzschildParams::check() const {
  if (!(mass >= 0.0) || !(G > 0.0) || !(c > 0.0))
    throw InvalidInput("mass must be nonnegative and G, c positive");
  if (!(height > 0.0))
    throw InvalidInput("height must be positive");
  if (!(radius > rs()))
    throw InvalidInput("radius is inside the horizon");
}

std::string to_string(Order o) {
  switch (o) {
  case Order::BeforeA:
    return "B<A";
  case Order::BeforeB:
    return "A<B";
  default:
    return "spacelike";
  }
}

namespace {

void check_branch(int branch) {
  if (branch != 1 && branch != 2)
    throw InvalidInput("branch must be 1 or 2");
}

double anchor(int branch, const SchwarzschildParams &p) {
  return branch == 1 ? p.radius : p.radius + p.height;
}

} // namespace

double radius_of(double z, int branch, const SchwarzschildParams &p) {
  check_branch(branch);
  const double r = branch == 1 ? p.radius + z : p.radius + p.height - z;
  if (!(r > p.rs()))
    throw InvalidInput("coordinate lies inside the horizon");
  return r;
}

CoordEvent worldline_event(Party party, double tau, int branch, const SchwarzschildParams &p) {
  p.check();
  check_branch(branch);
  if (!(tau >= 0.0))
    throw InvalidInput("proper time must be nonnegative");
  if (party == Party::A)
    return {tau, 0.0, branch};
  return {tau - clock_offset(tau, branch, p), p.height, branch};
}

std::pair<double, double> metric_components(int branch, double z, const SchwarzschildParams &p) {
  p.check();
  const double fr = p.f(radius_of(z, branch, p));
  return {-p.c * p.c * fr / p.f(anchor(branch, p)), 1.0 / fr};
}

double light_travel_time(double z_from, double z_to, int branch, const SchwarzschildParams &p) {
  p.check();
  double r1 = radius_of(z_from, branch, p), r2 = radius_of(z_to, branch, p);
  if (r2 < r1)
    std::swap(r1, r2);
  const double dr = r2 - r1, rs = p.rs();
  // int dr / f(r) = dr + r_s ln((r2 - r_s)/(r1 - r_s))
  const double integral = dr + (rs > 0.0 ? rs * std::log1p(dr / (r1 - rs)) : 0.0);
  return std::sqrt(p.f(anchor(branch, p))) / p.c * integral;
}

double light_travel_time_quadrature(double z_from, double z_to, int branch,
                                    const SchwarzschildParams &p) {
  p.check();
  double r1 = radius_of(z_from, branch, p), r2 = radius_of(z_to, branch, p);
  if (r2 < r1)
    std::swap(r1, r2);
  if (r1 == r2)
    return 0.0;
  const double rs = p.rs();
  // 1/f(r) = 1 + r_s/(r - r_s); the constant part integrates exactly.
  auto excess = [rs](double r) { return rs / (r - rs); };
  double err = 0.0;
  const double tail = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      excess, r1, r2, 12, 1e-13, &err);
  return std::sqrt(p.f(anchor(branch, p))) / p.c * ((r2 - r1) + tail);
}

double clock_offset(double tau, int branch, const SchwarzschildParams &p) {
  p.check();
  check_branch(branch);
  const double r = p.radius, h = p.height, rs = p.rs();
  // f(R + h) - f(R) = r_s h / (R (R + h)), kept out of the square roots.
  const double gap = rs * h / (r * (r + h));
  if (branch == 1) {
    const double d = gap / p.f(r + h); // 1 - f(R)/f(R + h)
    return tau * d / (1.0 + std::sqrt(1.0 - d));
  }
  const double e = gap / p.f(r); // f(R + h)/f(R) - 1
  return -tau * e / (1.0 + std::sqrt(1.0 + e));
}

Order branch_order(double tau_star, int branch, const SchwarzschildParams &p) {
  if (!(tau_star > 0.0))
    throw InvalidInput("tau_star must be positive");
  const double lead = clock_offset(tau_star, branch, p);
  const double light = light_travel_time(0.0, p.height, branch, p);
  if (lead >= light)
    return Order::BeforeA;
  if (-lead >= light)
    return Order::BeforeB;
  return Order::Spacelike;
}

std::pair<Order, Order> causal_order(double tau_star, const SchwarzschildParams &p) {
  return {branch_order(tau_star, 1, p), branch_order(tau_star, 2, p)};
}

std::optional<SwitchPoint> find_switch_point() {
  struct Candidate {
    double mass, radius, height;
  };
  // Earth and Sun surfaces first, then compact objects in units of r_s.
  std::vector<Candidate> cands{{5.972e24, 6.371e6, 1.0}, {1.989e30, 6.957e8, 1.0e3}};
  for (double rf : {1.0e3, 10.0, 3.0})
    for (double hf : {1.0, 0.1}) {
      const double rs = SchwarzschildParams{1.989e30}.rs();
      cands.push_back({1.989e30, rf * rs, hf * rs});
    }
  for (const auto &cand : cands) {
    SchwarzschildParams p;
    p.mass = cand.mass;
    p.radius = cand.radius;
    p.height = cand.height;
    for (double tau = p.height / p.c; tau < 1e12; tau *= 1.25) {
      auto [o1, o2] = causal_order(tau, p);
      if (o1 == Order::BeforeA && o2 == Order::BeforeB)
        return SwitchPoint{p, tau};
    }
  }
  return std::nullopt;
}

LabeledOperator gravitational_switch(const Matrix &u_a, const Matrix &u_b, double tol) {
  if (!is_unitary(u_a, tol) || !is_unitary(u_b, tol) || u_a.rows() != u_b.rows())
    throw InvalidInput("gravitational switch needs two unitaries of one dimension");
  SpaceLayout l({{"C", 2}, {"S", static_cast<std::size_t>(u_a.rows())}});
  return {l, l, switch_map(u_a, u_b)};
}

} // namespace cframes
