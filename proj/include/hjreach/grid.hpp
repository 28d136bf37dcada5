#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "interval.hpp"

namespace hjreach {

/// One uniformly sampled grid axis. Both endpoints are nodes; on a periodic
/// axis the first and last node represent the same point.
struct Axis
{
  double min         = 0.0;
  double max         = 1.0;
  std::size_t points = 2;
  bool periodic      = false;

  [[nodiscard]] double spacing() const { return (max - min) / static_cast<double>(points - 1); }
  [[nodiscard]] double coord(std::size_t i) const { return i + 1 == points ? max : min + static_cast<double>(i) * spacing(); }

  friend bool operator==(const Axis &, const Axis &) = default;
};

/// Uniform rectangular grid, row-major (last axis fastest).
class GridSpec
{
public:
  static constexpr std::size_t ghost_width = 3;
  static constexpr std::size_t max_dims    = 8;
  static constexpr std::size_t min_solver_points = 7;

  GridSpec() = default;

  explicit GridSpec(std::vector<Axis> axes) : axes_(std::move(axes))
  {
    if (axes_.empty() || axes_.size() > max_dims) { throw std::invalid_argument("grid must have between 1 and 8 axes"); }
    for (std::size_t d = 0; d < axes_.size(); ++d) {
      const auto & a = axes_[d];
      if (a.points < 2) { throw std::invalid_argument("grid axis " + std::to_string(d) + " needs at least two points"); }
      if (!(a.max > a.min) || !std::isfinite(a.min) || !std::isfinite(a.max)) {
        throw std::invalid_argument("grid axis " + std::to_string(d) + " needs finite min < max");
      }
    }
    strides_.assign(axes_.size(), 1);
    for (std::size_t d = axes_.size() - 1; d > 0; --d) { strides_[d - 1] = strides_[d] * axes_[d].points; }
    size_ = strides_[0] * axes_[0].points;
  }

  [[nodiscard]] std::size_t dims() const { return axes_.size(); }
  [[nodiscard]] std::size_t size() const { return size_; }
  [[nodiscard]] const Axis & axis(std::size_t d) const { return axes_[d]; }
  [[nodiscard]] const std::vector<Axis> & axes() const { return axes_; }
  [[nodiscard]] std::size_t stride(std::size_t d) const { return strides_[d]; }
  [[nodiscard]] double spacing(std::size_t d) const { return axes_[d].spacing(); }

  [[nodiscard]] double max_spacing() const
  {
    double m = 0.0;
    for (const auto & a : axes_) { m = std::max(m, a.spacing()); }
    return m;
  }

  /// The WENO5 stencil needs at least seven nodes along every axis.
  void require_solver_feasible() const
  {
    for (std::size_t d = 0; d < axes_.size(); ++d) {
      if (axes_[d].points < min_solver_points) {
        throw std::invalid_argument("grid axis " + std::to_string(d) + " has fewer than 7 points (WENO5 stencil)");
      }
    }
  }

  void index(std::size_t flat, std::span<std::size_t> idx) const
  {
    for (std::size_t d = 0; d < axes_.size(); ++d) {
      idx[d] = flat / strides_[d];
      flat -= idx[d] * strides_[d];
    }
  }

  [[nodiscard]] std::size_t flat(std::span<const std::size_t> idx) const
  {
    std::size_t f = 0;
    for (std::size_t d = 0; d < axes_.size(); ++d) { f += idx[d] * strides_[d]; }
    return f;
  }

  void coords(std::size_t flat_index, std::span<double> x) const
  {
    for (std::size_t d = 0; d < axes_.size(); ++d) {
      const std::size_t i = flat_index / strides_[d];
      flat_index -= i * strides_[d];
      x[d] = axes_[d].coord(i);
    }
  }

  [[nodiscard]] std::vector<Interval> box() const
  {
    std::vector<Interval> b;
    for (const auto & a : axes_) { b.push_back({a.min, a.max}); }
    return b;
  }

  friend bool operator==(const GridSpec & a, const GridSpec & b) { return a.axes_ == b.axes_; }

private:
  std::vector<Axis> axes_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
};

/// Samples `fn(const double* x)` at every grid node.
template<typename Fn>
std::vector<double> sample_grid(const GridSpec & grid, Fn && fn)
{
  std::vector<double> out(grid.size());
  std::array<double, GridSpec::max_dims> x{};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.coords(i, x);
    out[i] = fn(x.data());
  }
  return out;
}

}  // namespace hjreach
