#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "interval.hpp"

namespace hjreach {

/// Radial gravity profile U_rho(rho); the tangential component is taken as zero.
///
/// Values are signed radial accelerations: negative means toward the body.
/// A profile can be rescaled into normalized units with `scaled`, which keeps
/// the underlying SI description and applies length/acceleration factors.
class RadialGravity
{
public:
  struct PointMass
  {
    double gm;  // m^3/s^2
  };

  /// Piecewise-linear profile; held constant beyond the first/last sample.
  struct Table
  {
    std::vector<double> radius;
    std::vector<double> accel;
  };

  RadialGravity() : RadialGravity(PointMass{1.0}) {}

  explicit RadialGravity(PointMass pm) : model_(pm)
  {
    if (!(pm.gm > 0.0)) { throw std::domain_error("gravitational parameter must be positive"); }
  }

  explicit RadialGravity(Table table) : model_(std::move(table))
  {
    const auto & t = std::get<Table>(model_);
    if (t.radius.size() < 2 || t.radius.size() != t.accel.size()) {
      throw std::invalid_argument("gravity table needs at least two (radius, accel) rows");
    }
    for (std::size_t i = 1; i < t.radius.size(); ++i) {
      if (!(t.radius[i] > t.radius[i - 1])) { throw std::invalid_argument("gravity table radii must be strictly increasing"); }
    }
    for (double a : t.accel) {
      if (!(a < 0.0)) { throw std::invalid_argument("gravity table accelerations must be negative (attractive)"); }
    }
  }

  /// Same profile expressed in units where lengths are divided by `length_scale`
  /// and accelerations by `accel_scale`.
  [[nodiscard]] RadialGravity scaled(double length_scale, double accel_scale) const
  {
    RadialGravity out = *this;
    out.length_scale_ *= length_scale;
    out.accel_scale_ *= accel_scale;
    return out;
  }

  [[nodiscard]] double operator()(double rho) const
  {
    const double r = rho * length_scale_;
    return raw_accel(r) / accel_scale_;
  }

  /// Enclosure of U_rho over [lo, hi].
  [[nodiscard]] Interval range(double lo, double hi) const
  {
    const double rl = lo * length_scale_, rh = hi * length_scale_;
    Interval out = hull(Interval{raw_accel(rl)}, Interval{raw_accel(rh)});
    if (const auto * t = std::get_if<Table>(&model_)) {
      for (std::size_t i = 0; i < t->radius.size(); ++i) {
        if (t->radius[i] > rl && t->radius[i] < rh) { out = hull(out, Interval{t->accel[i]}); }
      }
    } else if (!(rl > 0.0)) {
      throw std::domain_error("point-mass gravity range requires positive radii");
    }
    return {out.lo / accel_scale_, out.hi / accel_scale_};
  }

  /// Upper bound of |dU_rho/drho| over [lo, hi].
  [[nodiscard]] double slope_bound(double lo, double hi) const
  {
    const double rl = lo * length_scale_, rh = hi * length_scale_;
    double s = 0.0;
    if (const auto * pm = std::get_if<PointMass>(&model_)) {
      if (!(rl > 0.0)) { throw std::domain_error("point-mass gravity slope requires positive radii"); }
      s = 2.0 * pm->gm / (rl * rl * rl);
    } else {
      const auto & t = std::get<Table>(model_);
      for (std::size_t i = 1; i < t.radius.size(); ++i) {
        if (t.radius[i] < rl || t.radius[i - 1] > rh) { continue; }
        s = std::max(s, std::abs((t.accel[i] - t.accel[i - 1]) / (t.radius[i] - t.radius[i - 1])));
      }
    }
    return s * length_scale_ / accel_scale_;
  }

  [[nodiscard]] bool is_point_mass() const { return std::holds_alternative<PointMass>(model_); }

private:
  [[nodiscard]] double raw_accel(double r) const
  {
    if (const auto * pm = std::get_if<PointMass>(&model_)) { return -pm->gm / (r * r); }
    const auto & t = std::get<Table>(model_);
    if (r <= t.radius.front()) { return t.accel.front(); }
    if (r >= t.radius.back()) { return t.accel.back(); }
    const auto it = std::upper_bound(t.radius.begin(), t.radius.end(), r);
    const auto i = static_cast<std::size_t>(it - t.radius.begin());
    const double w = (r - t.radius[i - 1]) / (t.radius[i] - t.radius[i - 1]);
    return (1.0 - w) * t.accel[i - 1] + w * t.accel[i];
  }

  std::variant<PointMass, Table> model_;
  double length_scale_ = 1.0;
  double accel_scale_ = 1.0;
};

/// Reads a two-column (radius m, signed radial acceleration m/s^2) text profile.
/// Blank lines and lines starting with '#' are skipped.
inline RadialGravity load_gravity_profile(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) { throw std::runtime_error("cannot open gravity profile '" + path.string() + "'"); }
  RadialGravity::Table table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') { continue; }
    std::istringstream row(line);
    double r = 0.0, a = 0.0;
    if (!(row >> r >> a)) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected 'radius_m accel_mps2'");
    }
    table.radius.push_back(r);
    table.accel.push_back(a);
  }
  return RadialGravity(std::move(table));
}

}  // namespace hjreach
