#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hjreach {

/// Closed real interval with outward-safe arithmetic for the handful of
/// operations needed to bound dynamics terms over a grid box.
struct Interval
{
  double lo = 0.0;
  double hi = 0.0;

  constexpr Interval() = default;
  constexpr Interval(double v) : lo(v), hi(v) {}
  constexpr Interval(double l, double h) : lo(l), hi(h) {}

  [[nodiscard]] double magnitude() const { return std::max(std::abs(lo), std::abs(hi)); }
  [[nodiscard]] bool contains(double v) const { return lo <= v && v <= hi; }
};

inline Interval operator+(Interval a, Interval b) { return {a.lo + b.lo, a.hi + b.hi}; }
inline Interval operator-(Interval a, Interval b) { return {a.lo - b.hi, a.hi - b.lo}; }
inline Interval operator-(Interval a) { return {-a.hi, -a.lo}; }

inline Interval operator*(Interval a, Interval b)
{
  const double p[] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

inline Interval operator/(Interval a, Interval b)
{
  if (b.lo <= 0.0 && b.hi >= 0.0) { throw std::domain_error("interval division by a range containing zero"); }
  return a * Interval{1.0 / b.hi, 1.0 / b.lo};
}

inline Interval sqr(Interval a)
{
  if (a.lo >= 0.0) { return {a.lo * a.lo, a.hi * a.hi}; }
  if (a.hi <= 0.0) { return {a.hi * a.hi, a.lo * a.lo}; }
  return {0.0, std::max(a.lo * a.lo, a.hi * a.hi)};
}

inline Interval hull(Interval a, Interval b) { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }

}  // namespace hjreach
