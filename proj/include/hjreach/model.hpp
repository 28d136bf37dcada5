#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "gravity.hpp"

namespace hjreach {

inline constexpr double kGravitationalConstant = 6.674e-11;  // m^3/(kg s^2)

/// Sphere-of-influence radius a (M1/M2)^(2/5).
inline double soi_radius(double semi_major_axis, double body_mass, double primary_mass)
{
  if (!(semi_major_axis > 0.0) || !(body_mass > 0.0) || !(primary_mass > 0.0)) {
    throw std::domain_error("soi_radius: all inputs must be positive");
  }
  return semi_major_axis * std::pow(body_mass / primary_mass, 0.4);
}

struct SpacecraftParams
{
  double dry_mass_kg          = 0.0;
  double max_thrust_n         = 0.0;
  double exhaust_velocity_mps = 0.0;
  double max_propellant_kg    = 0.0;

  /// Burnout mass equals dry mass.
  static constexpr double min_propellant_kg = 0.0;

  void validate() const
  {
    if (!(dry_mass_kg > 0.0)) { throw std::domain_error("spacecraft dry mass must be positive"); }
    if (!(max_thrust_n > 0.0)) { throw std::domain_error("spacecraft max thrust must be positive"); }
    if (!(exhaust_velocity_mps > 0.0)) { throw std::domain_error("spacecraft exhaust velocity must be positive"); }
    if (!(max_propellant_kg > 0.0)) { throw std::domain_error("spacecraft max propellant must be positive"); }
  }
};

struct AsteroidParams
{
  double gravitational_parameter = 0.0;  // m^3/s^2
  double spin_rate               = 0.0;  // rad/s about +z
  double semi_major_axis_m       = 0.0;
  double mass_kg                 = 0.0;
  double sun_mass_kg             = 0.0;
  double min_radius_m            = 0.0;
  double max_radius_m            = 0.0;

  /// Fills GM from G*M1 and the outer radius from the sphere of influence.
  static AsteroidParams from_orbit(double mass, double semi_major_axis, double sun_mass, double spin, double min_radius)
  {
    AsteroidParams p;
    p.mass_kg                 = mass;
    p.semi_major_axis_m       = semi_major_axis;
    p.sun_mass_kg             = sun_mass;
    p.spin_rate               = spin;
    p.min_radius_m            = min_radius;
    p.gravitational_parameter = kGravitationalConstant * mass;
    p.max_radius_m            = soi_radius(semi_major_axis, mass, sun_mass);
    return p;
  }

  void validate() const
  {
    if (!(gravitational_parameter > 0.0)) { throw std::domain_error("asteroid GM must be positive"); }
    if (!(spin_rate >= 0.0)) { throw std::domain_error("asteroid spin rate must be non-negative"); }
    if (!(min_radius_m > 0.0) || !(min_radius_m < max_radius_m)) {
      throw std::domain_error("asteroid radius bounds must satisfy 0 < rho_min < rho_max");
    }
  }
};

/// Planar solver state (rho, v_rho, v_t, dm). Unit-agnostic: the numerics use
/// normalized values, file/CLI boundaries use SI.
struct PlanarState
{
  double rho  = 0.0;
  double vrho = 0.0;
  double vt   = 0.0;
  double dm   = 0.0;

  [[nodiscard]] std::array<double, 4> coords() const { return {rho, vrho, vt, dm}; }
  static PlanarState from(const double * x) { return {x[0], x[1], x[2], x[3]}; }
};

/// Scales: length rho0, velocity v0, time rho0/v0, mass, force T_max.
struct Normalization
{
  double length_m     = 1.0;
  double velocity_mps = 1.0;
  double mass_kg      = 1.0;
  double force_n      = 1.0;

  [[nodiscard]] double time_s() const { return length_m / velocity_mps; }
  [[nodiscard]] double accel_mps2() const { return velocity_mps * velocity_mps / length_m; }

  /// Dimensionless thrust gain c = T_max rho0 / (m v0^2), with m the mass scale.
  [[nodiscard]] double thrust_constant() const { return force_n * length_m / (mass_kg * velocity_mps * velocity_mps); }

  [[nodiscard]] PlanarState to_normalized(const PlanarState & s) const
  {
    return {s.rho / length_m, s.vrho / velocity_mps, s.vt / velocity_mps, s.dm / mass_kg};
  }
  [[nodiscard]] PlanarState to_si(const PlanarState & s) const
  {
    return {s.rho * length_m, s.vrho * velocity_mps, s.vt * velocity_mps, s.dm * mass_kg};
  }
  [[nodiscard]] double time_to_normalized(double t_s) const { return t_s / time_s(); }
  [[nodiscard]] double time_to_si(double t) const { return t * time_s(); }
  [[nodiscard]] double thrust_to_normalized(double t_n) const { return t_n / force_n; }
  [[nodiscard]] double thrust_to_si(double t) const { return t * force_n; }

  void validate() const
  {
    if (!(length_m > 0.0) || !(velocity_mps > 0.0) || !(mass_kg > 0.0) || !(force_n > 0.0)) {
      throw std::domain_error("normalization scales must be positive");
    }
  }
};

/// State-constraint set K as the max of per-coordinate signed margins:
/// g <= 0 iff rho in [rho_min, rho_max] and dm in [dm_min, dm_max].
/// Lipschitz constant 1 in the max-norm of the coordinates it is expressed in.
struct ConstraintSet
{
  double rho_min = 0.0;
  double rho_max = 0.0;
  double dm_min  = 0.0;
  double dm_max  = 0.0;

  [[nodiscard]] double operator()(const PlanarState & s) const
  {
    return std::max({rho_min - s.rho, s.rho - rho_max, dm_min - s.dm, s.dm - dm_max});
  }
  [[nodiscard]] bool contains(const PlanarState & s) const
  {
    return s.rho >= rho_min && s.rho <= rho_max && s.dm >= dm_min && s.dm <= dm_max;
  }
};

/// Target set C: tolerance bands on rho, v_rho, v_t; mass unconstrained.
struct TargetSet
{
  double rho     = 0.0;
  double vrho    = 0.0;
  double vt      = 0.0;
  double rho_tol = 0.0;
  double vrho_tol = 0.0;
  double vt_tol  = 0.0;

  [[nodiscard]] double operator()(const PlanarState & s) const
  {
    return std::max({std::abs(s.rho - rho) - rho_tol, std::abs(s.vrho - vrho) - vrho_tol, std::abs(s.vt - vt) - vt_tol});
  }
  [[nodiscard]] bool contains(const PlanarState & s) const
  {
    return std::abs(s.rho - rho) <= rho_tol && std::abs(s.vrho - vrho) <= vrho_tol && std::abs(s.vt - vt) <= vt_tol;
  }
};

struct TargetOrbit
{
  double radius_m                = 0.0;
  double radial_velocity_mps     = 0.0;
  double tangential_velocity_mps = 0.0;
  // Unset widths default to one grid spacing of the solve.
  std::optional<double> radius_tol_m;
  std::optional<double> radial_velocity_tol_mps;
  std::optional<double> tangential_velocity_tol_mps;
};

struct InitialOrbit
{
  double radius_m                = 0.0;
  double radial_velocity_mps     = 0.0;
  double tangential_velocity_mps = 0.0;
  double theta_rad               = 0.0;
};

/// Rotating-frame tangential velocity of a circular orbit at radius rho
/// (inertial speed sqrt(-U_rho rho), frame speed omega rho).
inline double circular_orbit_tangential_velocity(const RadialGravity & gravity, double spin_rate, double rho, bool retrograde)
{
  const double v = std::sqrt(-gravity(rho) * rho);
  return (retrograde ? -v : v) - spin_rate * rho;
}

struct Scenario
{
  SpacecraftParams spacecraft;
  AsteroidParams asteroid;
  RadialGravity gravity;  // SI
  Normalization norm;
  TargetOrbit target;
  InitialOrbit initial;

  void validate() const
  {
    spacecraft.validate();
    asteroid.validate();
    norm.validate();
    if (std::abs(norm.force_n - spacecraft.max_thrust_n) > 1e-12 * spacecraft.max_thrust_n) {
      throw std::domain_error("normalization force scale must equal the spacecraft max thrust");
    }
    if (target.radius_m < asteroid.min_radius_m || target.radius_m > asteroid.max_radius_m) {
      throw std::domain_error("target radius must lie within [rho_min, rho_max]");
    }
    for (const auto & w : {target.radius_tol_m, target.radial_velocity_tol_mps, target.tangential_velocity_tol_mps}) {
      if (w && !(*w > 0.0)) { throw std::domain_error("target tolerance widths must be positive"); }
    }
  }

  /// K in normalized coordinates.
  [[nodiscard]] ConstraintSet constraint_set() const
  {
    return {asteroid.min_radius_m / norm.length_m, asteroid.max_radius_m / norm.length_m,
            SpacecraftParams::min_propellant_kg / norm.mass_kg, spacecraft.max_propellant_kg / norm.mass_kg};
  }

  /// C in normalized coordinates. `default_widths` (normalized rho, v_rho, v_t)
  /// fills tolerances left unset in the target orbit.
  [[nodiscard]] TargetSet target_set(const std::array<double, 3> & default_widths) const
  {
    TargetSet c;
    c.rho      = target.radius_m / norm.length_m;
    c.vrho     = target.radial_velocity_mps / norm.velocity_mps;
    c.vt       = target.tangential_velocity_mps / norm.velocity_mps;
    c.rho_tol  = target.radius_tol_m ? *target.radius_tol_m / norm.length_m : default_widths[0];
    c.vrho_tol = target.radial_velocity_tol_mps ? *target.radial_velocity_tol_mps / norm.velocity_mps : default_widths[1];
    c.vt_tol   = target.tangential_velocity_tol_mps ? *target.tangential_velocity_tol_mps / norm.velocity_mps
                                                    : default_widths[2];
    return c;
  }

  [[nodiscard]] PlanarState initial_state_normalized(double dm_kg) const
  {
    return norm.to_normalized({initial.radius_m, initial.radial_velocity_mps, initial.tangential_velocity_mps, dm_kg});
  }
};

}  // namespace hjreach
