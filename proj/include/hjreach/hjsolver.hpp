#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "grid.hpp"
#include "hamiltonian.hpp"
#include "model.hpp"
#include "parallel.hpp"
#include "value_field.hpp"
#include "weno.hpp"

namespace hjreach {

class CflViolation : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class NumericalAbort : public std::runtime_error
{
public:
  NumericalAbort(const std::string & what, double time) : std::runtime_error(what), time_(time) {}
  [[nodiscard]] double time() const { return time_; }

private:
  double time_;
};

/// h(x, p) evaluates the Hamiltonian at grid coordinates x and gradient p.
template<typename H>
concept GridHamiltonian = requires(const H & h, const double * x, const double * p) {
  { h(x, p) } -> std::convertible_to<double>;
};

struct SolverOptions
{
  double cfl    = 0.5;
  double max_dt = 1e-2;
  std::function<void(double)> progress;  // called with the reached horizon after each stored stamp
};

/// dt = cfl / sum_k(alpha_k / dx_k); falls back to `max_dt` when every alpha is zero.
inline double cfl_timestep(const GridSpec & grid, std::span<const double> alpha, double cfl = 0.5, double max_dt = 1e-2)
{
  if (alpha.size() != grid.dims()) { throw std::invalid_argument("cfl_timestep: one dissipation coefficient per axis"); }
  double rate = 0.0;
  for (std::size_t d = 0; d < grid.dims(); ++d) {
    if (!std::isfinite(alpha[d]) || alpha[d] < 0.0) { throw std::domain_error("cfl_timestep: dissipation must be finite and non-negative"); }
    rate += alpha[d] / grid.spacing(d);
  }
  return rate > 0.0 ? cfl / rate : max_dt;
}

/// Explicit solver for max{g - w, w_t + H(x, grad w)} = 0 forward in the
/// horizon t: global Lax-Friedrichs flux, WENO5 gradients, TVD-RK3 in time,
/// obstacle applied after each full step.
template<GridHamiltonian H>
class HjSolver
{
public:
  HjSolver(GridSpec grid, H hamiltonian, std::vector<double> alpha, std::vector<double> obstacle, SolverOptions options = {})
      : grid_(std::move(grid)), ham_(std::move(hamiltonian)), alpha_(std::move(alpha)), obstacle_(std::move(obstacle)),
        options_(std::move(options))
  {
    grid_.require_solver_feasible();
    if (alpha_.size() != grid_.dims()) { throw std::invalid_argument("HjSolver: one dissipation coefficient per axis"); }
    if (!obstacle_.empty() && obstacle_.size() != grid_.size()) { throw std::invalid_argument("HjSolver: obstacle size mismatch"); }
    if (!(options_.cfl > 0.0) || !(options_.max_dt > 0.0)) { throw std::invalid_argument("HjSolver: cfl and max_dt must be positive"); }
    dt_ = cfl_timestep(grid_, alpha_, options_.cfl, options_.max_dt);
    const std::size_t n = grid_.size();
    left_.assign(grid_.dims(), std::vector<double>(n));
    right_.assign(grid_.dims(), std::vector<double>(n));
    stage1_.resize(n);
    stage2_.resize(n);
    rate_.resize(n);
  }

  [[nodiscard]] const GridSpec & grid() const { return grid_; }
  [[nodiscard]] double stable_timestep() const { return dt_; }
  [[nodiscard]] std::span<const double> obstacle() const { return obstacle_; }

  /// -H_LF at every node.
  void rate(std::span<const double> phi, std::span<double> out)
  {
    const std::size_t dims = grid_.dims();
    for (std::size_t d = 0; d < dims; ++d) { weno5_derivatives(grid_, phi, d, left_[d], right_[d]); }
    parallel_for(grid_.size(), [&](std::size_t b, std::size_t e) {
      std::array<double, GridSpec::max_dims> x{}, p{};
      for (std::size_t i = b; i < e; ++i) {
        grid_.coords(i, x);
        double diss = 0.0;
        for (std::size_t d = 0; d < dims; ++d) {
          const double pl = left_[d][i], pr = right_[d][i];
          p[d] = 0.5 * (pl + pr);
          diss += 0.5 * alpha_[d] * (pr - pl);
        }
        out[i] = -(static_cast<double>(ham_(x.data(), p.data())) - diss);
      }
    });
  }

  /// Advances phi by dt (Shu-Osher RK3), then applies the obstacle.
  void step(std::vector<double> & phi, double dt)
  {
    if (!(dt > 0.0) || dt > dt_ * (1.0 + 1e-12)) {
      throw CflViolation("time step " + std::to_string(dt) + " violates the CFL bound " + std::to_string(dt_));
    }
    const std::size_t n = phi.size();
    rate(phi, rate_);
    for (std::size_t i = 0; i < n; ++i) { stage1_[i] = phi[i] + dt * rate_[i]; }
    rate(stage1_, rate_);
    for (std::size_t i = 0; i < n; ++i) { stage2_[i] = 0.75 * phi[i] + 0.25 * (stage1_[i] + dt * rate_[i]); }
    rate(stage2_, rate_);
    for (std::size_t i = 0; i < n; ++i) { phi[i] = phi[i] / 3.0 + 2.0 / 3.0 * (stage2_[i] + dt * rate_[i]); }
    if (!obstacle_.empty()) {
      for (std::size_t i = 0; i < n; ++i) { phi[i] = std::max(phi[i], obstacle_[i]); }
    }
  }

  /// Marches from the terminal slice at horizon 0 through ascending `stamps`
  /// (stamps.front() must be 0) and stores one slice per stamp.
  ValueField solve(std::vector<double> terminal, std::vector<double> stamps)
  {
    if (terminal.size() != grid_.size()) { throw std::invalid_argument("HjSolver: terminal slice size mismatch"); }
    if (stamps.empty() || stamps.front() != 0.0) { throw std::invalid_argument("HjSolver: stamps must start at 0"); }
    for (std::size_t k = 1; k < stamps.size(); ++k) {
      if (!(stamps[k] > stamps[k - 1])) { throw std::invalid_argument("HjSolver: stamps must be strictly ascending"); }
    }
    ValueField field{grid_, stamps, std::vector<float>(stamps.size() * grid_.size())};
    check_finite(terminal, 0.0);
    store(field, 0, terminal);
    double t = 0.0;
    for (std::size_t k = 1; k < stamps.size(); ++k) {
      while (t < stamps[k]) {
        double dt = std::min(dt_, stamps[k] - t);
        if (stamps[k] - (t + dt) < 1e-12 * dt_) { dt = stamps[k] - t; }
        step(terminal, dt);
        t = (dt == stamps[k] - t) ? stamps[k] : t + dt;
        check_finite(terminal, t);
      }
      store(field, k, terminal);
      if (options_.progress) { options_.progress(t); }
    }
    return field;
  }

private:
  static void check_finite(std::span<const double> phi, double t)
  {
    for (double v : phi) {
      if (!std::isfinite(v)) { throw NumericalAbort("non-finite value at horizon t = " + std::to_string(t), t); }
    }
  }

  static void store(ValueField & field, std::size_t k, std::span<const double> phi)
  {
    auto out = field.slice(k);
    for (std::size_t i = 0; i < phi.size(); ++i) { out[i] = static_cast<float>(phi[i]); }
  }

  GridSpec grid_;
  H ham_;
  std::vector<double> alpha_;
  std::vector<double> obstacle_;
  SolverOptions options_;
  double dt_ = 0.0;
  std::vector<std::vector<double>> left_, right_;
  std::vector<double> stage1_, stage2_, rate_;
};

/// Uniform horizon stamps 0, t_max/(count-1), ..., t_max.
inline std::vector<double> uniform_stamps(double t_max, std::size_t count)
{
  if (count < 1 || (count > 1 && !(t_max > 0.0))) { throw std::invalid_argument("uniform_stamps: need t_max > 0 and count >= 1"); }
  std::vector<double> s(count, 0.0);
  for (std::size_t k = 1; k < count; ++k) { s[k] = k + 1 == count ? t_max : t_max * static_cast<double>(k) / static_cast<double>(count - 1); }
  return s;
}

/// Planar Hamiltonian on the (rho, v_rho, v_t, dm) grid.
struct PlanarHamiltonian
{
  DynamicsParams params;
  double operator()(const double * x, const double * p) const
  {
    return planar_hamiltonian(params, PlanarState::from(x), std::span<const double>(p, 4));
  }
};

/// Signed distance-like margin of the grid box: negative inside, zero on the faces.
inline double hull_margin(const GridSpec & grid, const double * x)
{
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t d = 0; d < grid.dims(); ++d) {
    const auto & a = grid.axis(d);
    if (!a.periodic) { m = std::max({m, a.min - x[d], x[d] - a.max}); }
  }
  return m;
}

/// Normalized planar reach problem: grid over (rho, v_rho, v_t, dm), target
/// widths defaulting to one grid spacing per coordinate. With `confine_to_hull`
/// the grid box is part of the state constraint.
struct ReachProblem
{
  DynamicsParams dynamics;
  ConstraintSet constraints;
  TargetSet target;
  GridSpec grid;
  bool confine_to_hull = true;

  [[nodiscard]] double g(const double * x) const
  {
    const double k = constraints(PlanarState::from(x));
    return confine_to_hull ? std::max(k, hull_margin(grid, x)) : k;
  }
  [[nodiscard]] double nu(const double * x) const { return target(PlanarState::from(x)); }

  [[nodiscard]] std::vector<double> obstacle() const
  {
    return sample_grid(grid, [&](const double * x) { return g(x); });
  }
  [[nodiscard]] std::vector<double> terminal() const
  {
    return sample_grid(grid, [&](const double * x) { return std::max(nu(x), g(x)); });
  }
  [[nodiscard]] std::array<double, 4> dissipation() const
  {
    const auto b = grid.box();
    return planar_dissipation(dynamics, PlanarBox{b[0], b[1], b[2], b[3]});
  }
};

inline ReachProblem make_reach_problem(const Scenario & sc, const GridSpec & grid)
{
  if (grid.dims() != 4) { throw std::invalid_argument("planar reach problem needs a 4-axis grid (rho, v_rho, v_t, dm)"); }
  sc.validate();
  return {normalized_dynamics(sc), sc.constraint_set(), sc.target_set({grid.spacing(0), grid.spacing(1), grid.spacing(2)}), grid};
}

/// Value function w(r, t) of the planar reach-avoid problem on normalized horizons `stamps`.
inline ValueField solve_value_function(const ReachProblem & prob, const std::vector<double> & stamps, SolverOptions options = {})
{
  const auto alpha = prob.dissipation();
  HjSolver solver(prob.grid, PlanarHamiltonian{prob.dynamics}, std::vector<double>(alpha.begin(), alpha.end()), prob.obstacle(),
                  std::move(options));
  return solver.solve(prob.terminal(), stamps);
}

inline ValueField solve_value_function(const Scenario & sc, const GridSpec & grid, double t_max_norm, std::size_t stamp_count,
                                       SolverOptions options = {})
{
  return solve_value_function(make_reach_problem(sc, grid), uniform_stamps(t_max_norm, stamp_count), std::move(options));
}

}  // namespace hjreach
