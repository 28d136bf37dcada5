#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bolza.hpp"
#include "hjsolver.hpp"
#include "value_field.hpp"

namespace hjreach {

struct CostateEstimate
{
  std::array<double, GridSpec::max_dims> q{};
  std::size_t dims = 0;
  bool one_sided   = false;  // a difference fell back to one side near the hull
  bool clamped     = false;  // a query had to be clamped into the hull

  [[nodiscard]] std::span<const double> values() const { return std::span<const double>(q.data(), dims); }
};

/// Central differences of the interpolated field with a step of `step_cells` grid spacings.
inline CostateEstimate estimate_costate(const ValueField & field, std::span<const double> x, double t, double step_cells = 1e-2)
{
  if (!(step_cells > 0.0)) { throw std::invalid_argument("estimate_costate: step must be positive"); }
  const auto & grid = field.grid;
  CostateEstimate est;
  est.dims = grid.dims();
  std::array<double, GridSpec::max_dims> y{};
  std::copy(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(grid.dims()), y.begin());
  const std::span<const double> ys(y.data(), grid.dims());
  for (std::size_t d = 0; d < grid.dims(); ++d) {
    const auto & a = grid.axis(d);
    const double h = step_cells * a.spacing();
    double lo = x[d] - h, hi = x[d] + h;
    if (!a.periodic) {
      if (lo < a.min) {
        lo = x[d];
        est.one_sided = true;
      }
      if (hi > a.max) {
        hi = x[d];
        est.one_sided = true;
      }
      if (lo < a.min || hi > a.max || hi == lo) {
        est.clamped = true;
        lo = std::clamp(lo, a.min, a.max - h);
        hi = lo + h;
      }
    }
    y[d]           = hi;
    const double vh = field.interpolate(ys, t, false, &est.clamped);
    y[d]           = lo;
    const double vl = field.interpolate(ys, t, false, &est.clamped);
    y[d]           = x[d];
    est.q[d]       = (vh - vl) / (hi - lo);
  }
  return est;
}

/// Dynamics, sets and control law needed to roll out a trajectory on a value field.
template<typename M>
concept ReconstructionModel = requires(const M & m, const double * x, std::span<const double> q, std::vector<double> & state, double & theta,
                                       const Control & u, double h, double * out) {
  { m.dims() } -> std::convertible_to<std::size_t>;
  { m.control(x, q) } -> std::same_as<Control>;
  { m.advance(state, theta, u, h) };
  { m.euler(x, u, h, out) };
  { m.g(x) } -> std::convertible_to<double>;
  { m.nu(x) } -> std::convertible_to<double>;
};

/// Planar reach model on (rho, v_rho, v_t, dm).
struct PlanarModel
{
  ReachProblem problem;
  IntegratorTolerance tolerance{};

  [[nodiscard]] std::size_t dims() const { return 4; }
  [[nodiscard]] Control control(const double * x, std::span<const double> q) const
  {
    return optimal_planar_control(problem.dynamics, PlanarState::from(x), q);
  }
  void advance(std::vector<double> & x, double & theta, const Control & u, double h) const
  {
    auto s = PlanarState::from(x.data());
    integrate_planar(problem.dynamics, s, theta, u, h, tolerance);
    x = {s.rho, s.vrho, s.vt, s.dm};
  }
  void euler(const double * x, const Control & u, double h, double * out) const
  {
    const auto d = planar_rhs(problem.dynamics, PlanarState::from(x), u);
    out[0] = x[0] + h * d.drho;
    out[1] = x[1] + h * d.dvrho;
    out[2] = x[2] + h * d.dvt;
    out[3] = x[3] + h * d.ddm;
  }
  [[nodiscard]] double g(const double * x) const { return problem.g(x); }
  [[nodiscard]] double nu(const double * x) const { return problem.nu(x); }
};

/// Augmented model on (rho, v_rho, v_t, dm, z_1..z_p).
struct BolzaModel
{
  BolzaProblem problem;
  IntegratorTolerance tolerance{};

  [[nodiscard]] std::size_t dims() const { return 4 + problem.spec.dims(); }
  [[nodiscard]] Control control(const double * x, std::span<const double> q) const
  {
    return optimal_bolza_control(problem.reach.dynamics, problem.spec, PlanarState::from(x), q.first(4), q.subspan(4));
  }
  void advance(std::vector<double> & x, double & theta, const Control & u, double h) const
  {
    auto s = PlanarState::from(x.data());
    integrate_planar(problem.reach.dynamics, s, theta, u, h, tolerance);
    x[0] = s.rho;
    x[1] = s.vrho;
    x[2] = s.vt;
    x[3] = s.dm;
    for (std::size_t i = 0; i < problem.spec.dims(); ++i) { x[4 + i] -= problem.spec.running[i](u.thrust) * h; }
  }
  void euler(const double * x, const Control & u, double h, double * out) const
  {
    PlanarModel{problem.reach}.euler(x, u, h, out);
    for (std::size_t i = 0; i < problem.spec.dims(); ++i) { out[4 + i] = x[4 + i] - h * problem.spec.running[i](u.thrust); }
  }
  [[nodiscard]] double g(const double * x) const { return problem.reach.g(x); }
  /// Terminal condition of the augmented problem, i.e. target and cost bound jointly.
  [[nodiscard]] double nu(const double * x) const
  {
    double v = problem.reach.nu(x);
    const auto s = PlanarState::from(x);
    for (std::size_t i = 0; i < problem.spec.dims(); ++i) { v = std::max(v, problem.spec.terminal[i](s) - x[4 + i]); }
    return v;
  }
};

struct TrajectorySample
{
  double s = 0.0;          // time in [-t_f, 0]
  std::vector<double> x;   // field coordinates
  double theta = 0.0;
  Control u;               // control held over [s, s + h)
  double omega_hat = 0.0;  // interpolated value at (x, -s)
};

struct Trajectory
{
  std::vector<TrajectorySample> samples;
  std::vector<double> x0;
  double tf         = 0.0;
  std::size_t steps = 0;
  double terminal_nu = 0.0;
  double max_g       = -std::numeric_limits<double>::infinity();
  bool one_sided_costate = false;
  bool clamped           = false;
};

struct ReconstructOptions
{
  std::size_t steps = 4000;
  bool force        = false;
  double slack      = std::numeric_limits<double>::quiet_NaN();  // NaN: one grid cell (max spacing)
  double theta0     = 0.0;
  double costate_step = 1e-2;  // grid spacings
};

class InfeasibleStart : public std::runtime_error
{
public:
  InfeasibleStart(const std::string & what, double omega_hat) : std::runtime_error(what), omega_hat_(omega_hat) {}
  [[nodiscard]] double omega_hat() const { return omega_hat_; }

private:
  double omega_hat_;
};

class HullExit : public std::runtime_error
{
public:
  HullExit(const std::string & what, Trajectory partial) : std::runtime_error(what), partial_(std::move(partial)) {}
  [[nodiscard]] const Trajectory & partial() const { return partial_; }

private:
  Trajectory partial_;
};

/// Rolls out the optimal policy from x0 over [-t_f, 0] in `steps` equal steps.
/// The control for step k is the Hamiltonian minimizer at the costate of the
/// field at horizon t_f - (k+1) h, held constant while integrating adaptively.
template<ReconstructionModel M>
Trajectory reconstruct(const ValueField & field, const M & model, std::span<const double> x0, double tf, const ReconstructOptions & opt = {})
{
  const std::size_t dims = model.dims();
  if (field.grid.dims() != dims || x0.size() != dims) { throw std::invalid_argument("reconstruct: state dimension does not match the field"); }
  if (!(tf >= 0.0)) { throw std::invalid_argument("reconstruct: t_f must be non-negative"); }
  if (opt.steps < 1) { throw std::invalid_argument("reconstruct: need at least one step"); }
  const double slack = std::isnan(opt.slack) ? field.grid.max_spacing() : opt.slack;

  Trajectory traj;
  traj.x0 = std::vector<double>(x0.begin(), x0.end());
  traj.tf = tf;
  if (!field.in_hull(x0)) { throw InfeasibleStart("initial state lies outside the value-field hull", std::numeric_limits<double>::infinity()); }
  const double w0 = field.interpolate(x0, tf, false, &traj.clamped);
  if (w0 > slack && !opt.force) {
    throw InfeasibleStart("initial state is infeasible: interpolated value " + std::to_string(w0) + " > slack " + std::to_string(slack), w0);
  }

  const std::size_t n = tf > 0.0 ? opt.steps : 0;
  const double h      = n > 0 ? tf / static_cast<double>(n) : 0.0;
  traj.steps          = n;
  std::vector<double> x = traj.x0;
  double theta          = opt.theta0;

  auto finish_sample = [&](double s, double horizon_next, double omega_hat) {
    const auto est = estimate_costate(field, x, horizon_next, opt.costate_step);
    traj.one_sided_costate = traj.one_sided_costate || est.one_sided;
    traj.clamped           = traj.clamped || est.clamped;
    TrajectorySample smp{s, x, theta, model.control(x.data(), est.values()), omega_hat};
    traj.max_g = std::max(traj.max_g, model.g(x.data()));
    traj.samples.push_back(std::move(smp));
  };

  for (std::size_t k = 0; k < n; ++k) {
    const double s   = -tf + static_cast<double>(k) * h;
    const double wk  = k == 0 ? w0 : field.interpolate(x, -s, false, &traj.clamped);
    const double tau = std::max(0.0, tf - static_cast<double>(k + 1) * h);
    finish_sample(s, tau, wk);
    try {
      model.advance(x, theta, traj.samples.back().u, h);
    } catch (const std::exception & e) {
      throw HullExit(std::string("integration failed at s = ") + std::to_string(s) + ": " + e.what(), std::move(traj));
    }
    if (!field.in_hull(x)) {
      const double s_next = -tf + static_cast<double>(k + 1) * h;
      throw HullExit("state left the value-field hull at s = " + std::to_string(s_next), std::move(traj));
    }
  }
  finish_sample(0.0, 0.0, field.interpolate(x, 0.0, false, &traj.clamped));
  traj.terminal_nu = model.nu(x.data());
  return traj;
}

inline Trajectory reconstruct(const ValueField & field, const ReachProblem & prob, const PlanarState & r0, double tf,
                              const ReconstructOptions & opt = {})
{
  const auto c = r0.coords();
  return reconstruct(field, PlanarModel{prob}, std::span<const double>(c), tf, opt);
}

/// Per-coordinate terminal misses |r(0) - target| (normalized).
struct TerminalMiss
{
  double rho  = 0.0;
  double vrho = 0.0;
  double vt   = 0.0;
};

inline TerminalMiss terminal_miss(const Trajectory & traj, const TargetSet & target)
{
  const auto & x = traj.samples.back().x;
  return {std::abs(x[0] - target.rho), std::abs(x[1] - target.vrho), std::abs(x[2] - target.vt)};
}

/// max(w_hat(r + h f(r, u), t_next), g(r)) for an explicit control.
template<ReconstructionModel M>
double one_step_value(const ValueField & field, const M & model, std::span<const double> x, double t_next, double h, const Control & u)
{
  std::array<double, GridSpec::max_dims> y{};
  model.euler(x.data(), u, h, y.data());
  return std::max(field.interpolate(std::span<const double>(y.data(), model.dims()), t_next), model.g(x.data()));
}

struct OracleResult
{
  Control control;
  double value = 0.0;
};

/// Exhaustive minimization of the one-step value over a control lattice.
template<ReconstructionModel M>
OracleResult argmin_control_oracle(const ValueField & field, const M & model, std::span<const double> x, double t_next, double h,
                                   std::span<const Control> lattice)
{
  if (lattice.empty()) { throw std::invalid_argument("argmin_control_oracle: empty control lattice"); }
  OracleResult best{lattice.front(), std::numeric_limits<double>::infinity()};
  for (const auto & u : lattice) {
    const double v = one_step_value(field, model, x, t_next, h, u);
    if (v < best.value) { best = {u, v}; }
  }
  return best;
}

/// Planar control lattice: alpha on [-pi, pi) x thrust on [0, max_thrust].
inline std::vector<Control> planar_control_lattice(double max_thrust, std::size_t n_alpha, std::size_t n_thrust)
{
  if (n_alpha < 1 || n_thrust < 2) { throw std::invalid_argument("control lattice needs n_alpha >= 1 and n_thrust >= 2"); }
  std::vector<Control> out;
  out.reserve(n_alpha * n_thrust);
  for (std::size_t i = 0; i < n_alpha; ++i) {
    const double a = -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n_alpha);
    for (std::size_t j = 0; j < n_thrust; ++j) {
      out.push_back({a, std::numbers::pi / 2.0, max_thrust * static_cast<double>(j) / static_cast<double>(n_thrust - 1)});
    }
  }
  return out;
}

/// Centered moving average of thrust and circular mean of alpha; the window is
/// truncated at the ends.
inline Trajectory smooth_controls(Trajectory traj, std::size_t window)
{
  if (window < 1 || window % 2 == 0) { throw std::invalid_argument("smoothing window must be odd and >= 1"); }
  if (window == 1 || traj.samples.size() < 2) { return traj; }
  const std::size_t n = traj.samples.size(), r = window / 2;
  std::vector<Control> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t b = i >= r ? i - r : 0, e = std::min(n, i + r + 1);
    double thrust = 0.0, sn = 0.0, cs = 0.0;
    for (std::size_t j = b; j < e; ++j) {
      thrust += traj.samples[j].u.thrust;
      sn += std::sin(traj.samples[j].u.alpha);
      cs += std::cos(traj.samples[j].u.alpha);
    }
    out[i]        = traj.samples[i].u;
    out[i].thrust = thrust / static_cast<double>(e - b);
    out[i].alpha  = (sn == 0.0 && cs == 0.0) ? traj.samples[i].u.alpha : std::atan2(sn, cs);
  }
  for (std::size_t i = 0; i < n; ++i) { traj.samples[i].u = out[i]; }
  return traj;
}

}  // namespace hjreach
