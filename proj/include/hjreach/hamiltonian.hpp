#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>

#include "dynamics.hpp"
#include "interval.hpp"

namespace hjreach {

/// Optimal thrust angles for the velocity costates (q_rho, q_t, q_perp) of the
/// spherical form, with `value` = min over angles of
/// q_rho cos a + sin a (q_t sin d + q_perp cos d) = -||q||.
struct ThrustDirection
{
  double alpha = 0.0;
  double delta = 0.0;
  double value = 0.0;
};

inline ThrustDirection optimal_thrust_direction(double q_rho, double q_t, double q_perp)
{
  const double norm = std::sqrt(q_rho * q_rho + q_t * q_t + q_perp * q_perp);
  if (norm == 0.0) { return {0.0, 0.0, 0.0}; }
  // delta in [-pi/2, pi/2] aligns (sin d, cos d) with +-(q_t, q_perp); chi is the
  // resulting signed magnitude, then alpha points the thrust against (q_rho, chi).
  double delta = 0.0;
  if (q_perp != 0.0) {
    delta = std::atan(q_t / q_perp);
  } else if (q_t != 0.0) {
    delta = std::copysign(std::numbers::pi / 2.0, q_t);
  }
  const double chi   = q_t * std::sin(delta) + q_perp * std::cos(delta);
  const double alpha = std::atan2(-chi, -q_rho);
  return {alpha, delta, -norm};
}

/// Planar thrust angle: thrust antiparallel to (q_vrho, q_vt).
struct PlanarThrustDirection
{
  double alpha = 0.0;
  double value = 0.0;
};

inline PlanarThrustDirection optimal_planar_thrust_angle(double q_vrho, double q_vt)
{
  if (q_vrho == 0.0 && q_vt == 0.0) { return {0.0, 0.0}; }
  return {std::atan2(-q_vt, -q_vrho), -std::hypot(q_vrho, q_vt)};
}

/// ||q_v|| / (m0 + dm) + q_m / v_exhaust; thrust is on when this is >= 0.
inline double switching_function(const DynamicsParams & p, double qv_norm, double q_m, double dm)
{
  return qv_norm / (p.dry_mass + dm) + q_m / p.exhaust_velocity;
}

/// Bang-bang thrust magnitude; the singular case (switching function == 0)
/// resolves to max thrust.
inline double optimal_thrust_magnitude(const DynamicsParams & p, double qv_norm, double q_m, double dm)
{
  if (!(p.dry_mass + dm > 0.0)) { throw std::domain_error("optimal_thrust_magnitude: total mass must be positive"); }
  return switching_function(p, qv_norm, q_m, dm) >= 0.0 ? p.max_thrust : 0.0;
}

/// Minimizer of q^T f over the planar control set; q = (q_rho, q_vrho, q_vt, q_m).
inline Control optimal_planar_control(const DynamicsParams & p, const PlanarState & s, std::span<const double> q)
{
  const auto dir = optimal_planar_thrust_angle(q[1], q[2]);
  return {dir.alpha, std::numbers::pi / 2.0, optimal_thrust_magnitude(p, -dir.value, q[3], s.dm)};
}

/// H(r, q) = -min_u q^T f(r, u) for the planar solver state, with the drift
/// term taken from the dynamics rows.
inline double planar_hamiltonian(const DynamicsParams & p, const PlanarState & s, std::span<const double> q)
{
  const auto drift   = planar_drift(p, s);
  const double c     = q[0] * s.vrho + q[1] * drift.a_rho + q[2] * drift.a_t;
  const double sw    = switching_function(p, std::hypot(q[1], q[2]), q[3], s.dm);
  return -c + p.thrust_gain * p.max_thrust * std::max(sw, 0.0);
}

/// H(r, q) = -min_u q^T f(r, u) for the seven-state spherical form.
inline double spherical_hamiltonian(const DynamicsParams & p, const SphericalState & s, std::span<const double> q)
{
  const auto zero = spherical_rhs(p, s, Control{0.0, 0.0, 0.0});
  const auto f    = zero.coords();
  double c        = 0.0;
  for (int i = 0; i < 7; ++i) { c += q[i] * f[i]; }
  const double qv = std::sqrt(q[3] * q[3] + q[4] * q[4] + q[5] * q[5]);
  return -c + p.thrust_gain * p.max_thrust * std::max(switching_function(p, qv, q[6], s.dm), 0.0);
}

/// Global Lax-Friedrichs dissipation alpha_k >= |dH/dq_k| over a planar state
/// box (rho, v_rho, v_t, dm), valid for every costate.
inline std::array<double, 4> planar_dissipation(const DynamicsParams & p, const PlanarBox & box)
{
  for (const auto & iv : box) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo > iv.hi) {
      throw std::domain_error("planar_dissipation: state box must be finite and ordered");
    }
  }
  if (!(p.dry_mass + box[3].lo > 0.0)) { throw std::domain_error("planar_dissipation: total mass must stay positive"); }
  const auto drift    = planar_drift_range(p, box);
  const double thrust = p.thrust_gain * p.max_thrust / (p.dry_mass + box[3].lo);
  return {box[1].magnitude(), drift[0].magnitude() + thrust, drift[1].magnitude() + thrust,
          p.thrust_gain * p.max_thrust / p.exhaust_velocity};
}

}  // namespace hjreach
