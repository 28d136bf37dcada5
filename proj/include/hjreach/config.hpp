#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bolza.hpp"
#include "grid.hpp"
#include "model.hpp"

namespace hjreach {

class ConfigError : public std::runtime_error
{
public:
  ConfigError(const std::string & where, const std::string & what) : std::runtime_error(where + ": " + what) {}
};

/// Minimal INI reader: `[section]` headers, `key = value` lines, `#`/`;`
/// comments. Every value remembers its line for diagnostics.
class IniFile
{
public:
  struct Entry
  {
    std::string value;
    int line = 0;
  };

  static IniFile parse(std::istream & in, std::string source)
  {
    IniFile ini;
    ini.source_ = std::move(source);
    std::string raw, section;
    int line = 0;
    while (std::getline(in, raw)) {
      ++line;
      const auto cut = raw.find_first_of("#;");
      std::string s  = trim(cut == std::string::npos ? raw : raw.substr(0, cut));
      if (s.empty()) { continue; }
      if (s.front() == '[') {
        if (s.back() != ']' || s.size() < 3) { throw ConfigError(ini.where(line), "malformed section header"); }
        section = trim(s.substr(1, s.size() - 2));
        ini.sections_[section];
        continue;
      }
      const auto eq = s.find('=');
      if (eq == std::string::npos) { throw ConfigError(ini.where(line), "expected key = value"); }
      if (section.empty()) { throw ConfigError(ini.where(line), "key outside of any section"); }
      const std::string key = trim(s.substr(0, eq));
      if (key.empty()) { throw ConfigError(ini.where(line), "empty key"); }
      auto & sec = ini.sections_[section];
      if (sec.count(key)) { throw ConfigError(ini.where(line), "duplicate key [" + section + "] " + key); }
      sec[key] = {trim(s.substr(eq + 1)), line};
    }
    return ini;
  }

  static IniFile load(const std::filesystem::path & path)
  {
    std::ifstream is(path);
    if (!is) { throw ConfigError(path.string(), "cannot open config file"); }
    return parse(is, path.string());
  }

  [[nodiscard]] const std::string & source() const { return source_; }
  [[nodiscard]] bool has_section(const std::string & s) const { return sections_.count(s) > 0; }
  [[nodiscard]] bool has(const std::string & s, const std::string & k) const
  {
    auto it = sections_.find(s);
    return it != sections_.end() && it->second.count(k) > 0;
  }

  [[nodiscard]] const Entry & entry(const std::string & s, const std::string & k) const
  {
    auto it = sections_.find(s);
    if (it == sections_.end() || !it->second.count(k)) { throw ConfigError(source_, "missing required key [" + s + "] " + k); }
    used_.insert(s + "\x1f" + k);
    return it->second.at(k);
  }

  [[nodiscard]] std::string text(const std::string & s, const std::string & k) const { return entry(s, k).value; }

  [[nodiscard]] double number(const std::string & s, const std::string & k) const
  {
    const auto & e = entry(s, k);
    return to_double(e.value, e.line, s, k);
  }

  [[nodiscard]] double number(const std::string & s, const std::string & k, double fallback) const
  {
    return has(s, k) ? number(s, k) : fallback;
  }

  [[nodiscard]] std::size_t count(const std::string & s, const std::string & k) const
  {
    const double v = number(s, k);
    if (!(v >= 0.0) || v != std::floor(v)) { throw ConfigError(where(entry(s, k).line), "[" + s + "] " + k + " must be a non-negative integer"); }
    return static_cast<std::size_t>(v);
  }

  [[nodiscard]] std::size_t count(const std::string & s, const std::string & k, std::size_t fallback) const
  {
    return has(s, k) ? count(s, k) : fallback;
  }

  [[nodiscard]] bool flag(const std::string & s, const std::string & k, bool fallback) const
  {
    if (!has(s, k)) { return fallback; }
    const auto & e = entry(s, k);
    if (e.value == "true" || e.value == "1" || e.value == "yes") { return true; }
    if (e.value == "false" || e.value == "0" || e.value == "no") { return false; }
    throw ConfigError(where(e.line), "[" + s + "] " + k + " must be true or false");
  }

  [[nodiscard]] std::vector<double> numbers(const std::string & s, const std::string & k) const
  {
    const auto & e = entry(s, k);
    std::istringstream is(e.value);
    std::vector<double> out;
    std::string tok;
    while (is >> tok) { out.push_back(to_double(tok, e.line, s, k)); }
    if (out.empty()) { throw ConfigError(where(e.line), "[" + s + "] " + k + " needs at least one value"); }
    return out;
  }

  [[nodiscard]] int line(const std::string & s, const std::string & k) const { return entry(s, k).line; }
  [[nodiscard]] std::string where(int line) const { return source_ + ":" + std::to_string(line); }

  /// Rejects keys that were never read.
  void reject_unknown() const
  {
    for (const auto & [s, keys] : sections_) {
      for (const auto & [k, e] : keys) {
        if (!used_.count(s + "\x1f" + k)) { throw ConfigError(where(e.line), "unknown key [" + s + "] " + k); }
      }
    }
  }

  /// Canonical "section.key=value" lines, sorted.
  [[nodiscard]] std::string canonical() const
  {
    std::string out;
    for (const auto & [s, keys] : sections_) {
      for (const auto & [k, e] : keys) { out += s + "." + k + "=" + e.value + "\n"; }
    }
    return out;
  }

private:
  static std::string trim(const std::string & s)
  {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) { return {}; }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  double to_double(const std::string & v, int line, const std::string & s, const std::string & k) const
  {
    double out = 0.0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size() || !std::isfinite(out)) {
      throw ConfigError(where(line), "[" + s + "] " + k + " = '" + v + "' is not a finite number");
    }
    return out;
  }

  std::string source_;
  std::map<std::string, std::map<std::string, Entry>> sections_;
  mutable std::set<std::string> used_;
};

struct SolverConfig
{
  double cfl         = 0.5;
  double max_dt_norm = 1e-2;
  double horizon_s   = 0.0;
  std::size_t stamps = 201;
};

struct BolzaConfig
{
  bool enabled = false;
  std::string objective = "remaining_propellant";
  Axis z_axis;  // normalized
  double initial_propellant_kg = 0.0;
};

struct TrajectoryConfig
{
  std::size_t steps            = 4000;
  std::size_t smoothing_window = 21;
  std::optional<double> tf_s;
  std::optional<double> dm_kg;
};

struct ParetoConfig
{
  bool enabled = false;
  double dm_min_kg = 0.0, dm_max_kg = 0.0;
  std::size_t dm_points = 0;
  double z_min = 0.0, z_max = 0.0;  // normalized, Bolza scans
  std::size_t z_points = 0;
  double tf_min_s = 0.0, tf_max_s = 0.0;
  std::size_t tf_points = 0;
  bool bisect = true;
  bool weak   = false;
};

struct RunConfig
{
  std::filesystem::path source;
  std::string canonical;
  Scenario scenario;
  GridSpec grid;  // planar, normalized
  SolverConfig solver;
  BolzaConfig bolza;
  TrajectoryConfig trajectory;
  ParetoConfig pareto;

  [[nodiscard]] BolzaSpec bolza_spec() const
  {
    if (bolza.objective == "remaining_propellant") { return remaining_propellant_objective(); }
    throw ConfigError(source.string(), "unknown Bolza objective '" + bolza.objective + "'");
  }
};

namespace detail {

inline double tangential_target(const IniFile & ini, const Scenario & sc)
{
  const auto & e = ini.entry("target", "tangential_velocity_mps");
  if (e.value == "circular_retrograde" || e.value == "circular_prograde") {
    return circular_orbit_tangential_velocity(sc.gravity, sc.asteroid.spin_rate, sc.target.radius_m, e.value == "circular_retrograde");
  }
  return ini.number("target", "tangential_velocity_mps");
}

}  // namespace detail

/// Builds a run configuration; all errors carry file:line context.
inline RunConfig load_config(const IniFile & ini, const std::filesystem::path & base_dir = {})
{
  RunConfig cfg;
  cfg.source    = ini.source();
  cfg.canonical = ini.canonical();
  auto & sc     = cfg.scenario;
  auto guard    = [&](const std::string & section, const std::string & key, auto && fn) {
    try {
      fn();
    } catch (const ConfigError &) {
      throw;
    } catch (const std::exception & e) {
      const std::string where = ini.has(section, key) ? ini.where(ini.line(section, key)) : ini.source();
      throw ConfigError(where, e.what());
    }
  };

  sc.spacecraft.dry_mass_kg          = ini.number("spacecraft", "dry_mass_kg");
  sc.spacecraft.max_thrust_n         = ini.number("spacecraft", "max_thrust_n");
  sc.spacecraft.exhaust_velocity_mps = ini.number("spacecraft", "exhaust_velocity_mps");
  sc.spacecraft.max_propellant_kg    = ini.number("spacecraft", "max_propellant_kg");
  guard("spacecraft", "dry_mass_kg", [&] { sc.spacecraft.validate(); });

  auto & a = sc.asteroid;
  a.mass_kg           = ini.number("asteroid", "mass_kg");
  a.semi_major_axis_m = ini.number("asteroid", "semi_major_axis_m");
  a.sun_mass_kg       = ini.number("asteroid", "sun_mass_kg");
  a.min_radius_m      = ini.number("asteroid", "min_radius_m");
  if (ini.has("asteroid", "spin_rate_radps")) {
    a.spin_rate = ini.number("asteroid", "spin_rate_radps");
  } else {
    const double period_h = ini.number("asteroid", "rotation_period_h");
    if (!(period_h > 0.0)) { throw ConfigError(ini.where(ini.line("asteroid", "rotation_period_h")), "rotation period must be positive"); }
    a.spin_rate = 2.0 * std::numbers::pi / (period_h * 3600.0);
  }
  a.gravitational_parameter = ini.number("asteroid", "gravitational_parameter_m3ps2", kGravitationalConstant * a.mass_kg);
  guard("asteroid", "semi_major_axis_m", [&] {
    a.max_radius_m = ini.has("asteroid", "max_radius_m") ? ini.number("asteroid", "max_radius_m") : soi_radius(a.semi_major_axis_m, a.mass_kg, a.sun_mass_kg);
  });
  guard("asteroid", "min_radius_m", [&] { a.validate(); });

  const std::string model = ini.has("asteroid", "gravity") ? ini.text("asteroid", "gravity") : "point_mass";
  if (model == "point_mass") {
    sc.gravity = RadialGravity(RadialGravity::PointMass{a.gravitational_parameter});
  } else if (model == "table") {
    const std::filesystem::path p = ini.text("asteroid", "gravity_table");
    guard("asteroid", "gravity_table", [&] { sc.gravity = load_gravity_profile(p.is_absolute() ? p : base_dir / p); });
  } else {
    throw ConfigError(ini.where(ini.line("asteroid", "gravity")), "gravity must be point_mass or table");
  }

  sc.initial.radius_m                = ini.number("initial", "radius_m");
  sc.initial.radial_velocity_mps     = ini.number("initial", "radial_velocity_mps");
  sc.initial.tangential_velocity_mps = ini.number("initial", "tangential_velocity_mps");
  sc.initial.theta_rad               = ini.number("initial", "theta_rad", 0.0);

  sc.target.radius_m            = ini.number("target", "radius_m");
  sc.target.radial_velocity_mps = ini.number("target", "radial_velocity_mps");
  guard("target", "tangential_velocity_mps", [&] { sc.target.tangential_velocity_mps = detail::tangential_target(ini, sc); });
  if (ini.has("target", "radius_tol_m")) { sc.target.radius_tol_m = ini.number("target", "radius_tol_m"); }
  if (ini.has("target", "radial_velocity_tol_mps")) { sc.target.radial_velocity_tol_mps = ini.number("target", "radial_velocity_tol_mps"); }
  if (ini.has("target", "tangential_velocity_tol_mps")) {
    sc.target.tangential_velocity_tol_mps = ini.number("target", "tangential_velocity_tol_mps");
  }

  sc.norm.length_m     = ini.number("normalization", "length_m", sc.target.radius_m);
  sc.norm.velocity_mps = ini.number("normalization", "velocity_mps", 2.0);
  sc.norm.mass_kg      = ini.number("normalization", "mass_kg", 1.0);
  sc.norm.force_n      = sc.spacecraft.max_thrust_n;
  guard("target", "radius_m", [&] { sc.validate(); });

  const auto pts = ini.numbers("grid", "points");
  const auto lo  = ini.numbers("grid", "min_norm");
  const auto hi  = ini.numbers("grid", "max_norm");
  if (pts.size() != 4 || lo.size() != 4 || hi.size() != 4) {
    throw ConfigError(ini.where(ini.line("grid", "points")), "grid needs four values each for points, min_norm, max_norm (rho, v_rho, v_t, dm)");
  }
  std::vector<Axis> axes;
  for (int d = 0; d < 4; ++d) {
    if (pts[d] < 1 || pts[d] != std::floor(pts[d])) { throw ConfigError(ini.where(ini.line("grid", "points")), "grid points must be positive integers"); }
    axes.push_back({lo[d], hi[d], static_cast<std::size_t>(pts[d]), false});
  }
  guard("grid", "points", [&] {
    cfg.grid = GridSpec(axes);
    cfg.grid.require_solver_feasible();
  });

  cfg.solver.cfl         = ini.number("solver", "cfl", 0.5);
  cfg.solver.max_dt_norm = ini.number("solver", "max_dt_norm", 1e-2);
  cfg.solver.horizon_s   = ini.number("solver", "horizon_s");
  cfg.solver.stamps      = ini.count("solver", "stamps", 201);
  if (!(cfg.solver.cfl > 0.0 && cfg.solver.cfl <= 1.0)) { throw ConfigError(ini.where(ini.line("solver", "cfl")), "cfl must lie in (0, 1]"); }
  if (!(cfg.solver.horizon_s > 0.0)) { throw ConfigError(ini.where(ini.line("solver", "horizon_s")), "horizon must be positive"); }
  if (cfg.solver.stamps < 2) { throw ConfigError(ini.where(ini.line("solver", "stamps")), "need at least two stamps"); }

  if (ini.has_section("bolza")) {
    cfg.bolza.enabled   = true;
    cfg.bolza.objective = ini.has("bolza", "objective") ? ini.text("bolza", "objective") : "remaining_propellant";
    cfg.bolza.z_axis    = {ini.number("bolza", "z_min"), ini.number("bolza", "z_max"), ini.count("bolza", "z_points"), false};
    cfg.bolza.initial_propellant_kg = ini.number("bolza", "initial_propellant_kg", sc.spacecraft.max_propellant_kg);
    if (!(cfg.bolza.z_axis.max > cfg.bolza.z_axis.min) || cfg.bolza.z_axis.points < GridSpec::min_solver_points) {
      throw ConfigError(ini.where(ini.line("bolza", "z_points")), "z axis needs z_min < z_max and at least 7 points");
    }
    if (cfg.bolza.objective != "remaining_propellant") {
      throw ConfigError(ini.where(ini.line("bolza", "objective")), "unknown Bolza objective '" + cfg.bolza.objective + "'");
    }
  }

  cfg.trajectory.steps            = ini.count("trajectory", "steps", 4000);
  cfg.trajectory.smoothing_window = ini.count("trajectory", "smoothing_window", 21);
  if (ini.has("trajectory", "tf_s")) { cfg.trajectory.tf_s = ini.number("trajectory", "tf_s"); }
  if (ini.has("trajectory", "dm_kg")) { cfg.trajectory.dm_kg = ini.number("trajectory", "dm_kg"); }
  if (cfg.trajectory.steps < 1) { throw ConfigError(ini.where(ini.line("trajectory", "steps")), "steps must be >= 1"); }
  if (cfg.trajectory.smoothing_window % 2 == 0) {
    throw ConfigError(ini.where(ini.line("trajectory", "smoothing_window")), "smoothing window must be odd");
  }

  if (ini.has_section("pareto")) {
    auto & p     = cfg.pareto;
    p.enabled    = true;
    p.dm_min_kg  = ini.number("pareto", "dm_min_kg", 0.0);
    p.dm_max_kg  = ini.number("pareto", "dm_max_kg", sc.spacecraft.max_propellant_kg);
    p.dm_points  = ini.count("pareto", "dm_points", 21);
    p.z_min      = ini.number("pareto", "z_min", cfg.bolza.z_axis.min);
    p.z_max      = ini.number("pareto", "z_max", cfg.bolza.z_axis.max);
    p.z_points   = ini.count("pareto", "z_points", 41);
    p.tf_min_s   = ini.number("pareto", "tf_min_s");
    p.tf_max_s   = ini.number("pareto", "tf_max_s", cfg.solver.horizon_s);
    p.tf_points  = ini.count("pareto", "tf_points", 21);
    p.bisect     = ini.flag("pareto", "bisect", true);
    p.weak       = ini.flag("pareto", "weak", false);
    if (p.dm_points < 1 || p.tf_points < 1 || !(p.tf_max_s >= p.tf_min_s) || !(p.dm_max_kg >= p.dm_min_kg)) {
      throw ConfigError(ini.where(ini.line("pareto", "tf_min_s")), "pareto scan ranges must be ordered with at least one point");
    }
  }

  ini.reject_unknown();
  return cfg;
}

inline RunConfig load_config(const std::filesystem::path & path)
{
  return load_config(IniFile::load(path), path.parent_path());
}

/// n evenly spaced values from lo to hi inclusive (a single value gives lo).
inline std::vector<double> linspace(double lo, double hi, std::size_t n)
{
  std::vector<double> v(n, lo);
  for (std::size_t i = 1; i < n; ++i) { v[i] = i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1); }
  return v;
}

}  // namespace hjreach
