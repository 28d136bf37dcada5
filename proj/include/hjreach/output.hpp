#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "field_io.hpp"
#include "model.hpp"
#include "pareto.hpp"
#include "trajectory.hpp"

namespace hjreach {

inline constexpr std::string_view kVersion = "1.0.0";

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view bytes)
{
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v)
{
  static constexpr char digits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) { s[i] = digits[v & 0xF]; }
  return s;
}

inline std::ofstream open_output(const std::filesystem::path & path)
{
  std::ofstream os(path);
  if (!os) { throw std::runtime_error("cannot open " + path.string() + " for writing"); }
  return os;
}

/// One row per sample in SI units; only the planar coordinates are written.
inline void write_trajectory_csv(std::ostream & os, const Trajectory & traj, const Normalization & norm)
{
  os << "s,rho_m,theta_rad,vrho_mps,vt_mps,dm_kg,alpha_rad,thrust_N,omega_hat\n";
  for (const auto & smp : traj.samples) {
    const auto si = norm.to_si(PlanarState::from(smp.x.data()));
    os << format_double(norm.time_to_si(smp.s)) << ',' << format_double(si.rho) << ',' << format_double(smp.theta) << ','
       << format_double(si.vrho) << ',' << format_double(si.vt) << ',' << format_double(si.dm) << ',' << format_double(smp.u.alpha) << ','
       << format_double(norm.thrust_to_si(smp.u.thrust)) << ',' << format_double(smp.omega_hat) << '\n';
  }
}

/// Front rows: J1 (kg), J2 (s), the decision coordinate (dm in kg for Mayer,
/// z in grams for Bolza), t_f (s) and the interpolated value.
inline void write_front_csv(std::ostream & os, const ParetoResult & res, const Normalization & norm, bool bolza)
{
  os << "J1,J2,dm_kg_or_z_g,tf_s,omega_hat\n";
  for (const auto & p : res.front) {
    const double j1_kg = p.j[0] * norm.mass_kg;
    const double tf_s  = norm.time_to_si(p.tf);
    os << format_double(j1_kg) << ',' << format_double(tf_s) << ',' << format_double(bolza ? 1e3 * j1_kg : j1_kg) << ',' << format_double(tf_s)
       << ',' << format_double(p.omega_hat) << '\n';
  }
}

/// Pareto set: start coordinates in SI for each front point.
inline void write_pareto_set_csv(std::ostream & os, const ParetoResult & res, const Normalization & norm)
{
  os << "rho_m,vrho_mps,vt_mps,dm_kg,tf_s,z_kg\n";
  for (const auto & p : res.front) {
    const auto si = norm.to_si(PlanarState::from(p.x0.data()));
    os << format_double(si.rho) << ',' << format_double(si.vrho) << ',' << format_double(si.vt) << ',' << format_double(si.dm) << ','
       << format_double(norm.time_to_si(p.tf)) << ',';
    if (p.x0.size() > 4) { os << format_double(p.x0[4] * norm.mass_kg); }
    os << '\n';
  }
}

/// Two whitespace-separated columns: J1 in grams, J2 in seconds.
inline void write_plot_data(std::ostream & os, const ParetoResult & res, const Normalization & norm)
{
  os << "# J1_g J2_s\n";
  for (const auto & p : res.front) { os << format_double(1e3 * p.j[0] * norm.mass_kg) << ' ' << format_double(norm.time_to_si(p.tf)) << '\n'; }
}

struct RunManifest
{
  std::string scenario_hash;
  GridSpec grid;
  double cfl          = 0.5;
  std::size_t stamps  = 0;
  double horizon_s    = 0.0;
  double timestep_norm = 0.0;
  std::map<std::string, double> timings_s;
  std::string command;

  [[nodiscard]] nlohmann::json to_json() const
  {
    nlohmann::json axes = nlohmann::json::array();
    for (const auto & a : grid.axes()) { axes.push_back({{"min", a.min}, {"max", a.max}, {"points", a.points}, {"periodic", a.periodic}}); }
    return {{"scenario_hash", scenario_hash},
            {"command", command},
            {"grid", axes},
            {"solver", {{"cfl", cfl}, {"stamps", stamps}, {"horizon_s", horizon_s}, {"timestep_norm", timestep_norm}}},
            {"timings_s", timings_s},
            {"versions", {{"hjreach", std::string(kVersion)}, {"compiler", __VERSION__}, {"cplusplus", __cplusplus}}}};
  }
};

inline void write_manifest(const std::filesystem::path & path, const RunManifest & m)
{
  auto os = open_output(path);
  os << m.to_json().dump(2) << '\n';
}

}  // namespace hjreach
