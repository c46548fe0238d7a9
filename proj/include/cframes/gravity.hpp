/**
 * This code is part of causalframes.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef CFRAMES_GRAVITY_HPP
#define CFRAMES_GRAVITY_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cframes/tensor.hpp"

namespace cframes {

struct SchwarzschildParams {
  double mass = 0.0;   // kg
  double radius = 1.0; // R, m
  double height = 1.0; // h, m
  double G = 6.67430e-11;
  double c = 299792458.0;

  double rs() const { return 2.0 * G * mass / (c * c); }
  // 1 - r_s / r
  double f(double r) const;
  void check() const;
};

enum class Party { A, B };
enum class Order { BeforeA, BeforeB, Spacelike }; // B<A, A<B, neither

std::string to_string(Order o);

struct CoordEvent {
  double t = 0.0;
  double z = 0.0;
  int branch = 1;
};

// Branch 1: r = R + z, time scaled by sqrt(f(R)). Branch 2: r = R + h - z,
// time scaled by sqrt(f(R + h)). Alice sits at z = 0 and Bob at z = h in both.
double radius_of(double z, int branch, const SchwarzschildParams &p);

CoordEvent worldline_event(Party party, double tau, int branch, const SchwarzschildParams &p);

// (g_tt, g_zz) of the frame-adapted metric.
std::pair<double, double> metric_components(int branch, double z, const SchwarzschildParams &p);

// Radial light travel time in the branch's adapted coordinate time.
double light_travel_time(double z_from, double z_to, int branch, const SchwarzschildParams &p);
// Same, by adaptive Gauss-Kronrod quadrature of the null condition.
double light_travel_time_quadrature(double z_from, double z_to, int branch,
                                    const SchwarzschildParams &p);

// t_A - t_B at equal proper time tau, free of cancellation.
double clock_offset(double tau, int branch, const SchwarzschildParams &p);

Order branch_order(double tau_star, int branch, const SchwarzschildParams &p);
std::pair<Order, Order> causal_order(double tau_star, const SchwarzschildParams &p);

struct SwitchPoint {
  SchwarzschildParams params;
  double tau_star = 0.0;
};

// Deterministic grid search for a point with branch orders (B<A, A<B).
std::optional<SwitchPoint> find_switch_point();

// |0><0| (x) U_B U_A + |1><1| (x) U_A U_B, control first. Control |0>
// carries branch 2 (A before B), |1> branch 1.
LabeledOperator gravitational_switch(const Matrix &u_a, const Matrix &u_b,
                                     double tol = 1e-9);

} // namespace cframes

#endif
