#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "gravity.hpp"
#include "integrate.hpp"
#include "interval.hpp"
#include "model.hpp"

namespace hjreach {

/// Thrust command: incidence alpha in [-pi, pi], sideslip delta in [-pi/2, pi/2],
/// magnitude in [0, max_thrust]. The planar equations use delta = pi/2.
struct Control
{
  double alpha  = 0.0;
  double delta  = std::numbers::pi / 2.0;
  double thrust = 0.0;
};

/// Parameters of the equations of motion in one consistent unit system.
///
/// In SI the thrust gain is 1 and thrust is in newtons. In normalized units the
/// gain is c = T_max rho0 / (m v0^2) and thrust lives in [0, 1].
struct DynamicsParams
{
  double dry_mass         = 1.0;
  double exhaust_velocity = 1.0;
  double spin_rate        = 0.0;
  double thrust_gain      = 1.0;
  double max_thrust       = 1.0;
  RadialGravity gravity;

  [[nodiscard]] double mass_flow(double thrust) const { return -thrust_gain * thrust / exhaust_velocity; }
};

inline DynamicsParams physical_dynamics(const Scenario & sc)
{
  return {sc.spacecraft.dry_mass_kg, sc.spacecraft.exhaust_velocity_mps, sc.asteroid.spin_rate, 1.0,
          sc.spacecraft.max_thrust_n, sc.gravity};
}

inline DynamicsParams normalized_dynamics(const Scenario & sc)
{
  const auto & n = sc.norm;
  return {sc.spacecraft.dry_mass_kg / n.mass_kg,
          sc.spacecraft.exhaust_velocity_mps / n.velocity_mps,
          sc.asteroid.spin_rate * n.time_s(),
          n.thrust_constant(),
          sc.spacecraft.max_thrust_n / n.force_n,
          sc.gravity.scaled(n.length_m, n.accel_mps2())};
}

// ---------------------------------------------------------------------------
// Planar (equatorial) form

/// Derivative of the planar display state; `dtheta` is the theta row.
struct PlanarDerivative
{
  double drho   = 0.0;
  double dtheta = 0.0;
  double dvrho  = 0.0;
  double dvt    = 0.0;
  double ddm    = 0.0;
};

/// Drift accelerations of the rotating-frame polar equations: gravity,
/// centrifugal, Coriolis and the polar-coordinate transport terms.
struct PlanarDrift
{
  double a_rho = 0.0;
  double a_t   = 0.0;
};

inline PlanarDrift planar_drift(const DynamicsParams & p, const PlanarState & s)
{
  const double w = p.spin_rate;
  return {p.gravity(s.rho) + w * w * s.rho + 2.0 * w * s.vt + s.vt * s.vt / s.rho,
          -2.0 * w * s.vrho - s.vrho * s.vt / s.rho};
}

inline PlanarDerivative planar_rhs(const DynamicsParams & p, const PlanarState & s, const Control & u)
{
  if (!(s.rho > 0.0)) { throw std::domain_error("planar_rhs: rho must be positive"); }
  const double mass = p.dry_mass + s.dm;
  if (!(mass > 0.0)) { throw std::domain_error("planar_rhs: total mass must be positive"); }
  const auto drift  = planar_drift(p, s);
  const double acc  = p.thrust_gain * u.thrust / mass;
  return {s.vrho, s.vt / s.rho, drift.a_rho + acc * std::cos(u.alpha), drift.a_t + acc * std::sin(u.alpha),
          p.mass_flow(u.thrust)};
}

using PlanarBox = std::array<Interval, 4>;  // rho, v_rho, v_t, dm

/// Enclosures of the drift accelerations over a state box.
inline std::array<Interval, 2> planar_drift_range(const DynamicsParams & p, const PlanarBox & box)
{
  const Interval rho = box[0], vr = box[1], vt = box[2];
  const Interval w{p.spin_rate};
  const Interval a_rho = p.gravity.range(rho.lo, rho.hi) + w * w * rho + Interval{2.0} * w * vt + sqr(vt) / rho;
  const Interval a_t   = -(Interval{2.0} * w * vr) - vr * vt / rho;
  return {a_rho, a_t};
}

/// Upper bound of the state-Lipschitz constant (2-norm) of planar_rhs over a
/// box, uniformly in the control, from interval bounds of the Jacobian
/// entries: ||J||_2 <= ||J||_F.
inline double planar_lipschitz_bound(const DynamicsParams & p, const PlanarBox & box)
{
  const Interval rho = box[0], vr = box[1], vt = box[2];
  const Interval mass = Interval{p.dry_mass} + box[3];
  if (!(rho.lo > 0.0) || !(mass.lo > 0.0)) { throw std::domain_error("planar_lipschitz_bound: box must have rho > 0 and mass > 0"); }
  const double w      = p.spin_rate;
  const double thrust = p.thrust_gain * p.max_thrust / (mass.lo * mass.lo);
  // Rows: d(drho), d(dvrho), d(dvt); the mass row is state-independent.
  const double j_rho_vrho = 1.0;
  const double j_vr_rho   = (Interval{p.gravity.slope_bound(rho.lo, rho.hi)} + Interval{w * w} + sqr(vt) / sqr(rho)).magnitude();
  const double j_vr_vt    = (Interval{2.0 * w} + Interval{2.0} * vt / rho).magnitude();
  const double j_vr_dm    = thrust;
  const double j_vt_rho   = (vr * vt / sqr(rho)).magnitude();
  const double j_vt_vr    = (Interval{-2.0 * w} - vt / rho).magnitude();
  const double j_vt_vt    = (vr / rho).magnitude();
  const double j_vt_dm    = thrust;
  const double f2 = j_rho_vrho * j_rho_vrho + j_vr_rho * j_vr_rho + j_vr_vt * j_vr_vt + j_vr_dm * j_vr_dm + j_vt_rho * j_vt_rho
                    + j_vt_vr * j_vt_vr + j_vt_vt * j_vt_vt + j_vt_dm * j_vt_dm;
  return std::sqrt(f2);
}

/// Integrates the planar display state (rho, theta, v_rho, v_t, dm) under a
/// constant control for `duration`.
inline void integrate_planar(const DynamicsParams & p, PlanarState & s, double & theta, const Control & u, double duration,
                             IntegratorTolerance tol = {})
{
  std::vector<double> x{s.rho, theta, s.vrho, s.vt, s.dm};
  integrate_adaptive(
    [&](const std::vector<double> & y, std::vector<double> & dy, double) {
      const auto d = planar_rhs(p, {y[0], y[2], y[3], y[4]}, u);
      dy[0] = d.drho; dy[1] = d.dtheta; dy[2] = d.dvrho; dy[3] = d.dvt; dy[4] = d.ddm;
    },
    x, 0.0, duration, tol);
  s     = {x[0], x[2], x[3], x[4]};
  theta = x[1];
}

/// Trapezoidal quadrature of theta' = v_t / rho over ordered samples.
inline std::vector<double> reconstruct_theta(std::span<const double> time, std::span<const double> rho, std::span<const double> vt,
                                             double theta0)
{
  std::vector<double> theta(time.size(), theta0);
  for (std::size_t k = 1; k < time.size(); ++k) {
    theta[k] = theta[k - 1] + 0.5 * (time[k] - time[k - 1]) * (vt[k - 1] / rho[k - 1] + vt[k] / rho[k]);
  }
  return theta;
}

// ---------------------------------------------------------------------------
// Full 3D forms

/// Spherical state; psi is the polar angle from +z, so the equator is psi = pi/2.
struct SphericalState
{
  double rho   = 0.0;
  double theta = 0.0;
  double psi   = std::numbers::pi / 2.0;
  double vrho  = 0.0;
  double vt    = 0.0;
  double vperp = 0.0;
  double dm    = 0.0;

  [[nodiscard]] std::array<double, 7> coords() const { return {rho, theta, psi, vrho, vt, vperp, dm}; }
};

struct CartesianState
{
  std::array<double, 3> pos{};
  std::array<double, 3> vel{};
  double dm = 0.0;
};

namespace detail {

struct SphericalBasis
{
  std::array<double, 3> e_rho, e_theta, e_psi;
};

inline SphericalBasis spherical_basis(double theta, double psi)
{
  const double st = std::sin(theta), ct = std::cos(theta), sp = std::sin(psi), cp = std::cos(psi);
  return {{sp * ct, sp * st, cp}, {-st, ct, 0.0}, {cp * ct, cp * st, -sp}};
}

inline double dot3(const std::array<double, 3> & a, const std::array<double, 3> & b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

}  // namespace detail

inline CartesianState to_cartesian(const SphericalState & s)
{
  const auto b = detail::spherical_basis(s.theta, s.psi);
  CartesianState c;
  for (int i = 0; i < 3; ++i) {
    c.pos[i] = s.rho * b.e_rho[i];
    c.vel[i] = s.vrho * b.e_rho[i] + s.vt * b.e_theta[i] + s.vperp * b.e_psi[i];
  }
  c.dm = s.dm;
  return c;
}

inline SphericalState to_spherical(const CartesianState & c)
{
  SphericalState s;
  s.rho   = std::sqrt(detail::dot3(c.pos, c.pos));
  s.theta = std::atan2(c.pos[1], c.pos[0]);
  s.psi   = std::acos(c.pos[2] / s.rho);
  const auto b = detail::spherical_basis(s.theta, s.psi);
  s.vrho  = detail::dot3(c.vel, b.e_rho);
  s.vt    = detail::dot3(c.vel, b.e_theta);
  s.vperp = detail::dot3(c.vel, b.e_psi);
  s.dm    = c.dm;
  return s;
}

/// Thrust vector of a control expressed at a position, in Cartesian axes.
/// Components along (e_rho, e_theta, e_psi) are T (cos a, sin a sin d, sin a cos d).
inline std::array<double, 3> thrust_vector(const std::array<double, 3> & pos, const Control & u)
{
  const double rho   = std::sqrt(detail::dot3(pos, pos));
  const auto b       = detail::spherical_basis(std::atan2(pos[1], pos[0]), std::acos(pos[2] / rho));
  const double c_r   = u.thrust * std::cos(u.alpha);
  const double c_t   = u.thrust * std::sin(u.alpha) * std::sin(u.delta);
  const double c_p   = u.thrust * std::sin(u.alpha) * std::cos(u.delta);
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i) { out[i] = c_r * b.e_rho[i] + c_t * b.e_theta[i] + c_p * b.e_psi[i]; }
  return out;
}

/// Rotating-frame Cartesian equations with Coriolis and centrifugal terms
/// (uniform spin about +z, so no Euler force). Returns the 7-vector
/// [v; a; dm'] packed as a CartesianState.
inline CartesianState cartesian_rhs(const DynamicsParams & p, const CartesianState & s, const std::array<double, 3> & thrust)
{
  const double mass = p.dry_mass + s.dm;
  if (!(mass > 0.0)) { throw std::domain_error("cartesian_rhs: total mass must be positive"); }
  const double rho = std::sqrt(detail::dot3(s.pos, s.pos));
  const double g   = rho > 0.0 ? p.gravity(rho) / rho : 0.0;
  const double w   = p.spin_rate;
  const double k   = p.thrust_gain / mass;
  CartesianState d;
  d.pos    = s.vel;
  d.vel[0] = g * s.pos[0] + w * w * s.pos[0] + 2.0 * w * s.vel[1] + k * thrust[0];
  d.vel[1] = g * s.pos[1] + w * w * s.pos[1] - 2.0 * w * s.vel[0] + k * thrust[1];
  d.vel[2] = g * s.pos[2] + k * thrust[2];
  d.dm     = p.mass_flow(std::sqrt(detail::dot3(thrust, thrust)));
  return d;
}

inline CartesianState cartesian_rhs(const DynamicsParams & p, const CartesianState & s, const Control & u)
{
  return cartesian_rhs(p, s, thrust_vector(s.pos, u));
}

/// Closed-form spherical equations; returns the derivative packed as a
/// SphericalState (rho', theta', psi', v_rho', v_t', v_perp', dm').
inline SphericalState spherical_rhs(const DynamicsParams & p, const SphericalState & s, const Control & u)
{
  const double sp = std::sin(s.psi), cp = std::cos(s.psi);
  if (!(s.rho > 0.0)) { throw std::domain_error("spherical_rhs: rho must be positive"); }
  if (std::abs(sp) < 1e-12) { throw std::domain_error("spherical_rhs: state at a pole"); }
  const double mass = p.dry_mass + s.dm;
  if (!(mass > 0.0)) { throw std::domain_error("spherical_rhs: total mass must be positive"); }
  const double w   = p.spin_rate;
  const double cot = cp / sp;
  const double acc = p.thrust_gain * u.thrust / mass;

  const double a_rho  = p.gravity(s.rho) + w * w * s.rho * sp * sp + 2.0 * w * sp * s.vt + (s.vt * s.vt + s.vperp * s.vperp) / s.rho;
  const double a_t    = -2.0 * w * (sp * s.vrho + cp * s.vperp) - (s.vrho * s.vt + s.vperp * s.vt * cot) / s.rho;
  const double a_perp = w * w * s.rho * sp * cp + 2.0 * w * cp * s.vt + (s.vt * s.vt * cot - s.vrho * s.vperp) / s.rho;

  SphericalState d;
  d.rho   = s.vrho;
  d.theta = s.vt / (s.rho * sp);
  d.psi   = s.vperp / s.rho;
  d.vrho  = a_rho + acc * std::cos(u.alpha);
  d.vt    = a_t + acc * std::sin(u.alpha) * std::sin(u.delta);
  d.vperp = a_perp + acc * std::sin(u.alpha) * std::cos(u.delta);
  d.dm    = p.mass_flow(u.thrust);
  return d;
}

/// Cross-check of spherical_rhs against the Cartesian equations: the Cartesian
/// flow direction is pushed through the Cartesian-to-spherical map by a
/// Richardson-extrapolated central difference of step `h` (time units of
/// `p`). Returns the max abs difference over the seven rows.
inline double spherical_from_cartesian_consistency(const DynamicsParams & p, const SphericalState & s, const Control & u,
                                                   double h = 1e-3)
{
  if (std::abs(std::sin(s.psi)) < 1e-6) { throw std::domain_error("consistency check undefined at the poles"); }
  const CartesianState x  = to_cartesian(s);
  const CartesianState dx = cartesian_rhs(p, x, u);
  auto shifted = [&](double eps) {
    CartesianState y = x;
    for (int i = 0; i < 3; ++i) {
      y.pos[i] += eps * dx.pos[i];
      y.vel[i] += eps * dx.vel[i];
    }
    y.dm += eps * dx.dm;
    return to_spherical(y).coords();
  };
  auto central = [&](double step) {
    const auto a = shifted(step), b = shifted(-step);
    std::array<double, 7> d{};
    for (int i = 0; i < 7; ++i) {
      double diff = a[i] - b[i];
      if (i == 1) { diff = std::remainder(diff, 2.0 * std::numbers::pi); }
      d[i] = diff / (2.0 * step);
    }
    return d;
  };
  const auto coarse = central(h), fine = central(0.5 * h);
  const auto exact  = spherical_rhs(p, s, u).coords();
  double residual   = 0.0;
  for (int i = 0; i < 7; ++i) { residual = std::max(residual, std::abs((4.0 * fine[i] - coarse[i]) / 3.0 - exact[i])); }
  return residual;
}

}  // namespace hjreach
