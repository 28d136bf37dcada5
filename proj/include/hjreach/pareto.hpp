#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "value_field.hpp"

namespace hjreach {

using Objective = std::array<double, 2>;

/// a dominates b: strictly smaller in every component, or with `weak`,
/// no larger anywhere and strictly smaller somewhere.
inline bool dominates(const Objective & a, const Objective & b, bool weak = false)
{
  if (weak) { return a[0] <= b[0] && a[1] <= b[1] && (a[0] < b[0] || a[1] < b[1]); }
  return a[0] < b[0] && a[1] < b[1];
}

/// Indices of the non-dominated points, ordered by the first objective
/// (stable for ties).
inline std::vector<std::size_t> nondominated_filter(std::span<const Objective> pts, bool weak = false)
{
  for (const auto & p : pts) {
    if (!std::isfinite(p[0]) || !std::isfinite(p[1])) { throw std::invalid_argument("nondominated_filter: objectives must be finite"); }
  }
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pts[a][0] < pts[b][0]; });
  std::vector<std::size_t> keep;
  double best_before = std::numeric_limits<double>::infinity();  // min J2 over strictly smaller J1
  for (std::size_t g = 0; g < order.size();) {
    std::size_t e = g;
    double group_min = std::numeric_limits<double>::infinity();
    while (e < order.size() && pts[order[e]][0] == pts[order[g]][0]) { group_min = std::min(group_min, pts[order[e++]][1]); }
    for (std::size_t k = g; k < e; ++k) {
      const double j2 = pts[order[k]][1];
      const bool dominated = weak ? (best_before <= j2 || group_min < j2) : best_before < j2;
      if (!dominated) { keep.push_back(order[k]); }
    }
    best_before = std::min(best_before, group_min);
    g           = e;
  }
  return keep;
}

struct Feasibility
{
  bool feasible = false;
  double margin = 0.0;  // interpolated value; feasible iff <= 0
};

/// w_hat(x0, t_f) <= 0; queries outside the field hull throw.
inline Feasibility feasible(const ValueField & field, std::span<const double> x0, double tf)
{
  const double v = field.interpolate(x0, tf, true);
  return {v <= 0.0, v};
}

struct ParetoPoint
{
  std::vector<double> x0;  // field coordinates of the start
  double tf        = 0.0;  // normalized horizon
  Objective j{};           // (decision coordinate, t_f), normalized
  double omega_hat = 0.0;
  bool boundary    = false;  // produced by bisection
};

struct ParetoResult
{
  std::vector<ParetoPoint> candidates;
  std::vector<ParetoPoint> front;
  std::string diagnostics;
  bool weak = false;
};

struct ScanSpec
{
  std::vector<double> values;  // decision-coordinate lattice (dm or z), ascending
  std::vector<double> horizons;  // normalized t_f lattice
  bool bisect      = true;
  bool weak        = false;
  double value_tol = 1e-3;  // |w_hat| target at bisection boundaries
};

namespace detail {

/// Smallest feasible decision coordinate in [lo, hi] with w(lo) > 0 >= w(hi).
template<typename Eval>
std::pair<double, double> bisect_boundary(Eval && eval, double lo, double hi, double value_tol)
{
  double w_hi = eval(hi);
  for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double w   = eval(mid);
    if (w <= 0.0) {
      hi   = mid;
      w_hi = w;
      if (w >= -value_tol && hi - lo < 1e-9) { break; }
    } else {
      lo = mid;
    }
  }
  return {hi, w_hi};
}

inline ParetoResult scan_front(const ValueField & field, std::vector<double> base, std::size_t axis, const ScanSpec & scan)
{
  if (scan.values.empty() || scan.horizons.empty()) { throw std::invalid_argument("Pareto scan needs non-empty lattices"); }
  if (!std::is_sorted(scan.values.begin(), scan.values.end())) { throw std::invalid_argument("Pareto scan values must be ascending"); }
  ParetoResult res;
  res.weak = scan.weak;
  for (double tf : scan.horizons) {
    auto eval = [&](double v) {
      base[axis] = v;
      return feasible(field, base, tf).margin;
    };
    std::size_t first = scan.values.size();
    for (std::size_t i = 0; i < scan.values.size(); ++i) {
      const double m = eval(scan.values[i]);
      if (m <= 0.0) {
        if (first == scan.values.size()) { first = i; }
        base[axis] = scan.values[i];
        res.candidates.push_back({base, tf, {scan.values[i], tf}, m, false});
      }
    }
    if (scan.bisect && first != scan.values.size() && first > 0) {
      const auto [v, m] = bisect_boundary(eval, scan.values[first - 1], scan.values[first], scan.value_tol);
      base[axis] = v;
      res.candidates.push_back({base, tf, {v, tf}, m, true});
    }
  }
  if (res.candidates.empty()) {
    res.diagnostics = "no feasible point in decision range [" + std::to_string(scan.values.front()) + ", " + std::to_string(scan.values.back())
                      + "] x horizon range [" + std::to_string(*std::min_element(scan.horizons.begin(), scan.horizons.end())) + ", "
                      + std::to_string(*std::max_element(scan.horizons.begin(), scan.horizons.end())) + "] (normalized)";
    return res;
  }
  std::vector<Objective> obj;
  for (const auto & c : res.candidates) { obj.push_back(c.j); }
  for (std::size_t i : nondominated_filter(obj, scan.weak)) { res.front.push_back(res.candidates[i]); }
  return res;
}

}  // namespace detail

/// Mayer front (dm, t_f): `r0` holds (rho, v_rho, v_t) of the initial orbit,
/// scan.values the propellant lattice.
inline ParetoResult mayer_front(const ValueField & field, const std::array<double, 3> & r0, const ScanSpec & scan)
{
  if (field.grid.dims() != 4) { throw std::invalid_argument("mayer_front expects a planar 4-axis field"); }
  return detail::scan_front(field, {r0[0], r0[1], r0[2], 0.0}, 3, scan);
}

/// Bolza front (z0, t_f) at fixed initial propellant: scan.values is the z lattice.
/// Only the minimal feasible z0 per horizon is a candidate.
inline ParetoResult bolza_front(const ValueField & field, const std::array<double, 3> & r0, double dm0, const ScanSpec & scan)
{
  if (field.grid.dims() != 5) { throw std::invalid_argument("bolza_front expects a 5-axis (r, z) field"); }
  auto res = detail::scan_front(field, {r0[0], r0[1], r0[2], dm0, 0.0}, 4, scan);
  // keep the per-horizon minimum only
  std::vector<ParetoPoint> best;
  for (const auto & c : res.candidates) {
    auto it = std::find_if(best.begin(), best.end(), [&](const ParetoPoint & b) { return b.tf == c.tf; });
    if (it == best.end()) {
      best.push_back(c);
    } else if (c.j[0] < it->j[0]) {
      *it = c;
    }
  }
  res.candidates = best;
  res.front.clear();
  std::vector<Objective> obj;
  for (const auto & c : res.candidates) { obj.push_back(c.j); }
  for (std::size_t i : nondominated_filter(obj, scan.weak)) { res.front.push_back(res.candidates[i]); }
  return res;
}

}  // namespace hjreach
