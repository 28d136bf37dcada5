#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hamiltonian.hpp"
#include "hjsolver.hpp"

namespace hjreach {

/// J_t(r) = w . r + k on the planar state (rho, v_rho, v_t, dm), normalized.
struct AffineTerminalCost
{
  std::array<double, 4> weight{};
  double offset = 0.0;

  [[nodiscard]] double operator()(const PlanarState & s) const
  {
    return weight[0] * s.rho + weight[1] * s.vrho + weight[2] * s.vt + weight[3] * s.dm + offset;
  }
  /// Lipschitz constant with respect to the max-norm on the state.
  [[nodiscard]] double lipschitz() const { return std::abs(weight[0]) + std::abs(weight[1]) + std::abs(weight[2]) + std::abs(weight[3]); }
};

/// J_r(r, u) = a + b T, state independent.
struct AffineRunningCost
{
  double constant = 0.0;
  double per_thrust = 0.0;

  [[nodiscard]] double operator()(double thrust) const { return constant + per_thrust * thrust; }
  [[nodiscard]] double lipschitz() const { return 0.0; }
};

/// p-objective Bolza specification; component i pairs terminal[i] and running[i].
struct BolzaSpec
{
  std::vector<AffineTerminalCost> terminal;
  std::vector<AffineRunningCost> running;

  [[nodiscard]] std::size_t dims() const { return terminal.size(); }

  void validate() const
  {
    if (terminal.empty() || terminal.size() != running.size()) {
      throw std::invalid_argument("Bolza spec needs matching, non-empty terminal and running cost lists");
    }
  }

  [[nodiscard]] double terminal_lipschitz() const
  {
    double l = 0.0;
    for (const auto & t : terminal) { l = std::max(l, t.lipschitz()); }
    return l;
  }
  [[nodiscard]] double running_lipschitz() const
  {
    double l = 0.0;
    for (const auto & r : running) { l = std::max(l, r.lipschitz()); }
    return l;
  }
};

/// Maximize remaining propellant: p = 1, J_t = -dm, J_r = 0.
inline BolzaSpec remaining_propellant_objective()
{
  return {{AffineTerminalCost{{0.0, 0.0, 0.0, -1.0}, 0.0}}, {AffineRunningCost{}}};
}

/// Propellant consumption rate as a running cost: J_r = gain T / v_exhaust.
inline AffineRunningCost fuel_running_cost(const DynamicsParams & p)
{
  return {0.0, p.thrust_gain / p.exhaust_velocity};
}

struct AugmentedDerivative
{
  PlanarDerivative state;
  std::vector<double> z;
};

/// (r', z') = (f(r, u), -J_r(r, u)).
inline AugmentedDerivative augmented_rhs(const DynamicsParams & p, const BolzaSpec & spec, const PlanarState & s, const Control & u)
{
  AugmentedDerivative d{planar_rhs(p, s, u), std::vector<double>(spec.dims())};
  for (std::size_t i = 0; i < spec.dims(); ++i) { d.z[i] = -spec.running[i](u.thrust); }
  return d;
}

/// Thrust on iff gain * switching + q_z . b >= 0.
inline double bolza_switching(const DynamicsParams & p, const BolzaSpec & spec, const PlanarState & s, std::span<const double> q_r,
                              std::span<const double> q_z)
{
  double sw = p.thrust_gain * switching_function(p, std::hypot(q_r[1], q_r[2]), q_r[3], s.dm);
  for (std::size_t i = 0; i < spec.dims(); ++i) { sw += q_z[i] * spec.running[i].per_thrust; }
  return sw;
}

/// min over controls of q_r . f(r, u) - q_z . J_r(r, u).
inline double bolza_hamiltonian(const DynamicsParams & p, const BolzaSpec & spec, const PlanarState & s, std::span<const double> q_r,
                                std::span<const double> q_z)
{
  const auto drift = planar_drift(p, s);
  double value     = q_r[0] * s.vrho + q_r[1] * drift.a_rho + q_r[2] * drift.a_t;
  for (std::size_t i = 0; i < spec.dims(); ++i) { value -= q_z[i] * spec.running[i].constant; }
  return value - p.max_thrust * std::max(bolza_switching(p, spec, s, q_r, q_z), 0.0);
}

/// Minimizing control of the Bolza Hamiltonian.
inline Control optimal_bolza_control(const DynamicsParams & p, const BolzaSpec & spec, const PlanarState & s, std::span<const double> q_r,
                                     std::span<const double> q_z)
{
  if (!(p.dry_mass + s.dm > 0.0)) { throw std::domain_error("optimal_bolza_control: total mass must be positive"); }
  const auto dir = optimal_planar_thrust_angle(q_r[1], q_r[2]);
  return {dir.alpha, std::numbers::pi / 2.0, bolza_switching(p, spec, s, q_r, q_z) >= 0.0 ? p.max_thrust : 0.0};
}

/// Solver Hamiltonian on the augmented grid (rho, v_rho, v_t, dm, z_1..z_p).
struct BolzaGridHamiltonian
{
  DynamicsParams params;
  BolzaSpec spec;
  double operator()(const double * x, const double * q) const
  {
    return -bolza_hamiltonian(params, spec, PlanarState::from(x), std::span<const double>(q, 4), std::span<const double>(q + 4, spec.dims()));
  }
};

struct BolzaProblem
{
  ReachProblem reach;  // planar part, grid over the first four axes
  BolzaSpec spec;
  GridSpec grid;       // augmented grid

  [[nodiscard]] double terminal_value(const double * x) const
  {
    const auto s = PlanarState::from(x);
    double v     = std::max(reach.g(x), reach.target(s));
    for (std::size_t i = 0; i < spec.dims(); ++i) { v = std::max(v, spec.terminal[i](s) - x[4 + i]); }
    return v;
  }
  [[nodiscard]] std::vector<double> terminal() const
  {
    return sample_grid(grid, [&](const double * x) { return terminal_value(x); });
  }
  [[nodiscard]] std::vector<double> obstacle() const
  {
    return sample_grid(grid, [&](const double * x) { return reach.g(x); });
  }
  [[nodiscard]] std::vector<double> dissipation() const
  {
    const auto a = reach.dissipation();
    std::vector<double> alpha(a.begin(), a.end());
    for (const auto & r : spec.running) {
      alpha.push_back(std::max(std::abs(r.constant), std::abs(r.constant + r.per_thrust * reach.dynamics.max_thrust)));
    }
    return alpha;
  }
};

inline BolzaProblem make_bolza_problem(const ReachProblem & reach, BolzaSpec spec, const std::vector<Axis> & z_axes)
{
  spec.validate();
  if (z_axes.size() != spec.dims()) { throw std::invalid_argument("one z axis per Bolza objective"); }
  auto axes = reach.grid.axes();
  axes.insert(axes.end(), z_axes.begin(), z_axes.end());
  return {reach, std::move(spec), GridSpec(std::move(axes))};
}

/// Value function of the augmented problem over (r, z).
inline ValueField solve_bolza_value_function(const BolzaProblem & prob, const std::vector<double> & stamps, SolverOptions options = {})
{
  HjSolver solver(prob.grid, BolzaGridHamiltonian{prob.reach.dynamics, prob.spec}, prob.dissipation(), prob.obstacle(), std::move(options));
  return solver.solve(prob.terminal(), stamps);
}

}  // namespace hjreach
