// hjreach: value-function solves, trajectory reconstruction and Pareto fronts.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <hjreach/hjreach.hpp>

namespace fs = std::filesystem;
using namespace hjreach;

namespace {

enum ExitCode : int { kOk = 0, kFailure = 1, kConfig = 2, kInfeasible = 3, kEmptyFront = 4, kNumerical = 5 };

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void print_grid(std::ostream & os, const GridSpec & g, const char * const * names)
{
  for (std::size_t d = 0; d < g.dims(); ++d) {
    const auto & a = g.axis(d);
    os << "  " << names[d] << ": [" << a.min << ", " << a.max << "] points " << a.points << " spacing " << a.spacing() << '\n';
  }
}

constexpr const char * kAxisNames[] = {"rho", "v_rho", "v_t", "dm", "z1", "z2", "z3", "z4"};

void print_scenario(std::ostream & os, const RunConfig & cfg)
{
  const auto & sc = cfg.scenario;
  const auto dyn  = normalized_dynamics(sc);
  const auto tgt  = sc.target_set({cfg.grid.spacing(0), cfg.grid.spacing(1), cfg.grid.spacing(2)});
  const auto k    = sc.constraint_set();
  const auto x0   = sc.initial_state_normalized(0.0);
  os << "scenario " << cfg.source.string() << '\n'
     << "  GM " << sc.asteroid.gravitational_parameter << " m^3/s^2, spin " << sc.asteroid.spin_rate << " rad/s, rho in ["
     << sc.asteroid.min_radius_m << ", " << sc.asteroid.max_radius_m << "] m\n"
     << "  scales: length " << sc.norm.length_m << " m, velocity " << sc.norm.velocity_mps << " m/s, time " << sc.norm.time_s()
     << " s, mass " << sc.norm.mass_kg << " kg, force " << sc.norm.force_n << " N\n"
     << "  normalized: c " << dyn.thrust_gain << ", dry mass " << dyn.dry_mass << ", v_exhaust " << dyn.exhaust_velocity << ", spin "
     << dyn.spin_rate << '\n'
     << "  K: rho [" << k.rho_min << ", " << k.rho_max << "], dm [" << k.dm_min << ", " << k.dm_max << "]\n"
     << "  C: rho " << tgt.rho << " +- " << tgt.rho_tol << ", v_rho " << tgt.vrho << " +- " << tgt.vrho_tol << ", v_t " << tgt.vt << " +- "
     << tgt.vt_tol << '\n'
     << "  initial: rho " << x0.rho << ", v_rho " << x0.vrho << ", v_t " << x0.vt << '\n'
     << "grid (normalized)\n";
  print_grid(os, cfg.grid, kAxisNames);
}

double memory_estimate_mb(const GridSpec & g, std::size_t stamps)
{
  const double field   = 4.0 * static_cast<double>(g.size()) * static_cast<double>(stamps);
  const double working = 8.0 * static_cast<double>(g.size()) * static_cast<double>(2 * g.dims() + 5);
  return (field + working) / (1024.0 * 1024.0);
}

SolverOptions solver_options(const RunConfig & cfg, bool quiet)
{
  SolverOptions opt;
  opt.cfl    = cfg.solver.cfl;
  opt.max_dt = cfg.solver.max_dt_norm;
  if (!quiet) {
    const double horizon = cfg.scenario.norm.time_to_normalized(cfg.solver.horizon_s);
    opt.progress = [horizon, last = -1](double t) mutable {
      const int pct = static_cast<int>(100.0 * t / horizon);
      if (pct / 10 != last / 10) {
        std::cerr << "  " << pct << "%\n";
        last = pct;
      }
    };
  }
  return opt;
}

RunManifest make_manifest(const RunConfig & cfg, const GridSpec & grid, const std::string & command, double dt)
{
  RunManifest m;
  m.scenario_hash = hex64(fnv1a(cfg.canonical));
  m.grid          = grid;
  m.cfl           = cfg.solver.cfl;
  m.stamps        = cfg.solver.stamps;
  m.horizon_s     = cfg.solver.horizon_s;
  m.timestep_norm = dt;
  m.command       = command;
  return m;
}

int run_solve(const std::string & config, const std::string & out, bool bolza, bool quiet)
{
  const auto t0  = Clock::now();
  const auto cfg = load_config(config);
  print_scenario(std::cout, cfg);
  const auto reach  = make_reach_problem(cfg.scenario, cfg.grid);
  const auto stamps = uniform_stamps(cfg.scenario.norm.time_to_normalized(cfg.solver.horizon_s), cfg.solver.stamps);
  ValueField field;
  GridSpec grid;
  double dt = 0.0;
  if (bolza) {
    if (!cfg.bolza.enabled) { throw ConfigError(cfg.source.string(), "bolza-solve needs a [bolza] section"); }
    const auto prob = make_bolza_problem(reach, cfg.bolza_spec(), {cfg.bolza.z_axis});
    grid            = prob.grid;
    const auto a    = prob.dissipation();
    dt              = cfl_timestep(grid, a, cfg.solver.cfl, cfg.solver.max_dt_norm);
    std::cout << "  z: [" << cfg.bolza.z_axis.min << ", " << cfg.bolza.z_axis.max << "] points " << cfg.bolza.z_axis.points << '\n';
    std::cout << "solving " << grid.size() << " nodes x " << stamps.size() << " stamps, dt " << dt << " (normalized)\n";
    field = solve_bolza_value_function(prob, stamps, solver_options(cfg, quiet));
  } else {
    grid         = reach.grid;
    const auto a = reach.dissipation();
    dt           = cfl_timestep(grid, a, cfg.solver.cfl, cfg.solver.max_dt_norm);
    std::cout << "solving " << grid.size() << " nodes x " << stamps.size() << " stamps, dt " << dt << " (normalized)\n";
    field = solve_value_function(reach, stamps, solver_options(cfg, quiet));
  }
  const double solve_s = seconds_since(t0);
  write_field(out, field);
  auto manifest = make_manifest(cfg, grid, bolza ? "bolza-solve" : "solve", dt);
  manifest.timings_s["solve"] = solve_s;
  write_manifest(out + ".json", manifest);
  std::printf("wrote %s (%zu values)\nwall time %.1f s, memory estimate %.1f MB\n", out.c_str(), field.data.size(), solve_s,
              memory_estimate_mb(grid, stamps.size()));
  return kOk;
}

int run_trajectory(const std::string & config, const std::string & field_path, const std::string & out, std::optional<double> tf_s,
                   std::optional<double> dm_kg, std::optional<double> z_kg, std::optional<std::size_t> steps, bool force,
                   std::optional<std::string> smoothed_out)
{
  const auto cfg   = load_config(config);
  const auto field = read_field(field_path);
  const auto & sc  = cfg.scenario;
  const auto & nm  = sc.norm;
  const bool bolza = field.grid.dims() == 5;
  if (!bolza && field.grid.dims() != 4) { throw std::runtime_error("trajectory needs a 4-axis or 5-axis field"); }
  GridSpec planar(std::vector<Axis>(field.grid.axes().begin(), field.grid.axes().begin() + 4));
  const auto reach = make_reach_problem(sc, planar);

  const double tf = nm.time_to_normalized(tf_s ? *tf_s : cfg.trajectory.tf_s.value_or(cfg.solver.horizon_s));
  double dm       = dm_kg ? *dm_kg : cfg.trajectory.dm_kg.value_or(sc.spacecraft.max_propellant_kg);
  if (bolza && !dm_kg) { dm = cfg.bolza.initial_propellant_kg; }
  const auto x0s = sc.initial_state_normalized(dm);
  std::vector<double> x0{x0s.rho, x0s.vrho, x0s.vt, x0s.dm};
  if (bolza) {
    if (!z_kg) { throw std::runtime_error("a Bolza field needs --z-kg"); }
    x0.push_back(*z_kg / nm.mass_kg);
  }

  ReconstructOptions opt;
  opt.steps  = steps.value_or(cfg.trajectory.steps);
  opt.force  = force;
  opt.theta0 = sc.initial.theta_rad;
  const auto t0 = Clock::now();
  Trajectory traj;
  int code = kOk;
  try {
    traj = bolza ? reconstruct(field, BolzaModel{make_bolza_problem(reach, cfg.bolza_spec(), {field.grid.axis(4)})}, x0, tf, opt)
                 : reconstruct(field, PlanarModel{reach}, x0, tf, opt);
  } catch (const HullExit & e) {
    std::cerr << "error: " << e.what() << '\n';
    traj = e.partial();
    code = kFailure;
  }
  {
    auto os = open_output(out);
    write_trajectory_csv(os, traj, nm);
  }
  if (smoothed_out) {
    auto os = open_output(*smoothed_out);
    write_trajectory_csv(os, smooth_controls(traj, cfg.trajectory.smoothing_window), nm);
  }
  if (traj.samples.empty()) { return code; }
  const auto & last = traj.samples.back();
  const auto first  = traj.samples.front();
  const auto miss   = terminal_miss(traj, reach.target);
  std::size_t on    = 0;
  for (const auto & s : traj.samples) { on += s.u.thrust > 0.0 ? 1 : 0; }
  std::printf("trajectory %s: %zu samples, t_f %.1f s, initial propellant %.2f g\n", out.c_str(), traj.samples.size(), nm.time_to_si(tf),
              1e3 * x0s.dm * nm.mass_kg);
  std::printf("  |rho_final - rho_target|   %.6g m\n", miss.rho * nm.length_m);
  std::printf("  |v_rho_final - v_rho_target| %.6g m/s\n", miss.vrho * nm.velocity_mps);
  std::printf("  |v_t_final - v_t_target|   %.6g m/s\n", miss.vt * nm.velocity_mps);
  std::printf("  propellant used %.3f g, duty cycle %.3f, terminal nu %.4g, max g %.4g\n",
              1e3 * (first.x[3] - last.x[3]) * nm.mass_kg, static_cast<double>(on) / static_cast<double>(traj.samples.size()),
              traj.terminal_nu, traj.max_g);
  if (bolza) { std::printf("  z(0) %.4f g\n", 1e3 * last.x[4] * nm.mass_kg); }
  if (traj.clamped || traj.one_sided_costate) { std::printf("  note: hull-adjacent queries were clamped or one-sided\n"); }
  std::printf("  wall time %.2f s\n", seconds_since(t0));
  return code;
}

int run_pareto(const std::string & config, const std::string & field_path, const std::string & out, std::optional<std::string> set_out,
               std::optional<std::string> plot_out, bool weak, bool no_bisect)
{
  const auto cfg   = load_config(config);
  const auto field = read_field(field_path);
  const auto & sc  = cfg.scenario;
  const auto & nm  = sc.norm;
  const auto & p   = cfg.pareto;
  if (!p.enabled) { throw ConfigError(cfg.source.string(), "pareto needs a [pareto] section"); }
  const bool bolza = field.grid.dims() == 5;
  const auto x0    = sc.initial_state_normalized(0.0);
  ScanSpec scan;
  scan.bisect = !no_bisect && p.bisect;
  scan.weak   = weak || p.weak;
  for (double t : linspace(p.tf_min_s, p.tf_max_s, p.tf_points)) { scan.horizons.push_back(nm.time_to_normalized(t)); }
  ParetoResult res;
  if (bolza) {
    scan.values = linspace(p.z_min, p.z_max, p.z_points);
    res         = bolza_front(field, {x0.rho, x0.vrho, x0.vt}, cfg.bolza.initial_propellant_kg / nm.mass_kg, scan);
  } else {
    scan.values = linspace(p.dm_min_kg / nm.mass_kg, p.dm_max_kg / nm.mass_kg, p.dm_points);
    res         = mayer_front(field, {x0.rho, x0.vrho, x0.vt}, scan);
  }
  if (res.front.empty()) {
    std::cerr << "empty front: " << res.diagnostics << "\n  scanned t_f [" << p.tf_min_s << ", " << p.tf_max_s << "] s, "
              << (bolza ? "z [" + std::to_string(p.z_min) + ", " + std::to_string(p.z_max) + "]"
                        : "dm [" + std::to_string(p.dm_min_kg) + ", " + std::to_string(p.dm_max_kg) + "] kg")
              << '\n';
    return kEmptyFront;
  }
  {
    auto os = open_output(out);
    write_front_csv(os, res, nm, bolza);
  }
  {
    auto os = open_output(set_out.value_or(out + ".set.csv"));
    write_pareto_set_csv(os, res, nm);
  }
  {
    auto os = open_output(plot_out.value_or(out + ".dat"));
    write_plot_data(os, res, nm);
  }
  std::printf("front %s: %zu points from %zu feasible candidates\n", out.c_str(), res.front.size(), res.candidates.size());
  for (const auto & pt : res.front) { std::printf("  J1 %8.3f g   t_f %7.1f s\n", 1e3 * pt.j[0] * nm.mass_kg, nm.time_to_si(pt.tf)); }
  return kOk;
}

int run_info(const std::string & field_path)
{
  const auto f = read_field(field_path);
  std::printf("HJVF1 %s\n  dims %zu, nodes %zu, stamps %zu\n", field_path.c_str(), f.grid.dims(), f.grid.size(), f.stamps.size());
  print_grid(std::cout, f.grid, kAxisNames);
  if (!f.stamps.empty()) { std::printf("  horizon [%g, %g] (normalized)\n", f.stamps.front(), f.stamps.back()); }
  return kOk;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Hamilton-Jacobi reachability for low-thrust transfers around a rotating asteroid"};
  app.require_subcommand(1);

  std::string config, field, out;
  std::optional<double> tf_s, dm_kg, z_kg;
  std::optional<std::size_t> steps;
  std::optional<std::string> smoothed, set_out, plot_out;
  bool force = false, weak = false, no_bisect = false, quiet = false;

  auto * solve = app.add_subcommand("solve", "Solve the Mayer value function and write an HJVF1 field");
  solve->add_option("-c,--config", config, "Scenario config (INI)")->required();
  solve->add_option("-o,--out", out, "Output field file")->required();
  solve->add_flag("-q,--quiet", quiet, "No progress output");

  auto * bsolve = app.add_subcommand("bolza-solve", "Solve the augmented (state, z) value function");
  bsolve->add_option("-c,--config", config, "Scenario config (INI) with a [bolza] section")->required();
  bsolve->add_option("-o,--out", out, "Output field file")->required();
  bsolve->add_flag("-q,--quiet", quiet, "No progress output");

  auto * traj = app.add_subcommand("trajectory", "Reconstruct the optimal trajectory from a field");
  traj->add_option("-c,--config", config, "Scenario config (INI)")->required();
  traj->add_option("-f,--field", field, "Field file")->required();
  traj->add_option("-o,--out", out, "Trajectory CSV")->required();
  traj->add_option("--tf-s", tf_s, "Transfer time in seconds");
  traj->add_option("--dm-kg", dm_kg, "Initial propellant in kg");
  traj->add_option("--z-kg", z_kg, "Initial cost bound z0 in kg (Bolza fields)");
  traj->add_option("--steps", steps, "Number of reconstruction steps");
  traj->add_option("--smoothed", smoothed, "Also write the smoothed-control trajectory here");
  traj->add_flag("--force", force, "Reconstruct even from an infeasible start");

  auto * pareto = app.add_subcommand("pareto", "Compute the Pareto front from a field");
  pareto->add_option("-c,--config", config, "Scenario config (INI) with a [pareto] section")->required();
  pareto->add_option("-f,--field", field, "Field file")->required();
  pareto->add_option("-o,--out", out, "Front CSV")->required();
  pareto->add_option("--set", set_out, "Pareto-set CSV (default <out>.set.csv)");
  pareto->add_option("--plot", plot_out, "Plot data file (default <out>.dat)");
  pareto->add_flag("--weak", weak, "Weak-dominance filtering");
  pareto->add_flag("--no-bisect", no_bisect, "Skip boundary bisection");

  auto * info = app.add_subcommand("info", "Print the header of a field file");
  info->add_option("-f,--field", field, "Field file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*solve) { return run_solve(config, out, false, quiet); }
    if (*bsolve) { return run_solve(config, out, true, quiet); }
    if (*traj) { return run_trajectory(config, field, out, tf_s, dm_kg, z_kg, steps, force, smoothed); }
    if (*pareto) { return run_pareto(config, field, out, set_out, plot_out, weak, no_bisect); }
    if (*info) { return run_info(field); }
  } catch (const ConfigError & e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const InfeasibleStart & e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const NumericalAbort & e) {
    std::cerr << "numerical abort: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
