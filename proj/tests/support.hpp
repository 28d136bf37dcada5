#pragma once

// Shared fixtures for the unit tests and the acceptance binary.

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <hjreach/hjreach.hpp>

namespace hjreach::testing {

inline std::filesystem::path config_path(const std::string & name) { return std::filesystem::path(HJREACH_CONFIG_DIR) / name; }

inline std::mt19937_64 make_rng(std::uint64_t seed = 20240611) { return std::mt19937_64(seed); }

/// x' = u, |u| <= 1: H(x, p) = -min_u p u = |p|.
struct SingleIntegrator
{
  double operator()(const double *, const double * p) const { return std::abs(p[0]); }
};

/// Closed-form value of the single-integrator reach problem with nu = |x| - 0.1.
inline double single_integrator_value(double x, double t) { return std::max(std::abs(x) - t, 0.0) - 0.1; }

struct OneDimSolve
{
  GridSpec grid;
  ValueField field;
  std::vector<double> terminal;
  std::vector<double> obstacle;
};

/// Single integrator on [-1, 1] with n cells, inactive constraint g = -1.
inline OneDimSolve solve_single_integrator(std::size_t cells, double horizon, std::size_t stamps = 11)
{
  GridSpec grid({Axis{-1.0, 1.0, cells + 1, false}});
  auto terminal = sample_grid(grid, [](const double * x) { return single_integrator_value(x[0], 0.0); });
  std::vector<double> obstacle(grid.size(), -1.0);
  HjSolver solver(grid, SingleIntegrator{}, {1.0}, obstacle);
  auto field = solver.solve(terminal, uniform_stamps(horizon, stamps));
  return {grid, std::move(field), std::move(terminal), std::move(obstacle)};
}

struct InvariantReport
{
  std::size_t terminal_mismatch = 0;  // nodes where slice 0 != float(max(nu, g))
  std::size_t below_obstacle    = 0;  // nodes below float(g) on any slice
  std::size_t non_finite        = 0;
  std::size_t checked           = 0;

  [[nodiscard]] bool ok() const { return terminal_mismatch == 0 && below_obstacle == 0 && non_finite == 0 && checked > 0; }
};

/// Structural invariants of a stored solve: the terminal slice is exactly the
/// terminal data and every slice sits on or above the obstacle.
inline InvariantReport check_qvi_invariants(const ValueField & field, std::span<const double> terminal, std::span<const double> obstacle)
{
  InvariantReport r;
  const auto n = field.grid.size();
  for (std::size_t k = 0; k < field.slice_count(); ++k) {
    const auto s = field.slice(k);
    for (std::size_t i = 0; i < n; ++i) {
      ++r.checked;
      if (!std::isfinite(s[i])) { ++r.non_finite; }
      if (!obstacle.empty() && s[i] < static_cast<float>(obstacle[i])) { ++r.below_obstacle; }
      if (k == 0 && s[i] != static_cast<float>(terminal[i])) { ++r.terminal_mismatch; }
    }
  }
  return r;
}

inline InvariantReport check_qvi_invariants(const ValueField & field, const ReachProblem & prob)
{
  return check_qvi_invariants(field, prob.terminal(), prob.obstacle());
}

/// Coarse planar Castalia-like field, solved once per process.
struct CoarsePlanar
{
  RunConfig config;
  ReachProblem problem;
  ValueField field;
};

inline const CoarsePlanar & coarse_planar(std::size_t stamps = 36)
{
  static const CoarsePlanar cached = [stamps] {
    auto cfg  = load_config(config_path("castalia_coarse.ini"));
    auto prob = make_reach_problem(cfg.scenario, cfg.grid);
    SolverOptions opt;
    opt.cfl = cfg.solver.cfl;
    auto field = solve_value_function(prob, uniform_stamps(cfg.scenario.norm.time_to_normalized(cfg.solver.horizon_s), stamps), opt);
    return CoarsePlanar{std::move(cfg), std::move(prob), std::move(field)};
  }();
  return cached;
}

}  // namespace hjreach::testing
