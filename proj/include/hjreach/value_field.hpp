#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "grid.hpp"

namespace hjreach {

class OutOfHull : public std::out_of_range
{
public:
  using std::out_of_range::out_of_range;
};

/// Time-stamped scalar field on a grid. Slices are stored in single precision,
/// stamps ascending from the terminal stamp (horizon 0).
struct ValueField
{
  GridSpec grid;
  std::vector<double> stamps;
  std::vector<float> data;  // stamps.size() * grid.size(), slice-major

  [[nodiscard]] std::size_t slice_count() const { return stamps.size(); }

  [[nodiscard]] std::span<const float> slice(std::size_t k) const
  {
    return std::span<const float>(data).subspan(k * grid.size(), grid.size());
  }
  [[nodiscard]] std::span<float> slice(std::size_t k) { return std::span<float>(data).subspan(k * grid.size(), grid.size()); }

  /// Multilinear interpolation of slice k. Out-of-hull coordinates are clamped
  /// to the hull (and reported through `clamped`) unless `strict` is set.
  [[nodiscard]] double interpolate_slice(std::size_t k, std::span<const double> x, bool strict = false, bool * clamped = nullptr) const
  {
    const std::size_t dims = grid.dims();
    std::array<std::size_t, GridSpec::max_dims> base{};
    std::array<double, GridSpec::max_dims> w{};
    bool outside = false;
    for (std::size_t d = 0; d < dims; ++d) {
      const auto & a = grid.axis(d);
      double u       = (x[d] - a.min) / a.spacing();
      const double n1 = static_cast<double>(a.points - 1);
      if (a.periodic) {
        u = u - n1 * std::floor(u / n1);
      } else if (u < 0.0 || u > n1) {
        const double slack = 1e-9 * n1;
        if (u < -slack || u > n1 + slack) { outside = true; }
        u = std::clamp(u, 0.0, n1);
      }
      auto i  = static_cast<std::size_t>(std::floor(u));
      i       = std::min(i, a.points - 2);
      base[d] = i;
      w[d]    = u - static_cast<double>(i);
    }
    if (outside) {
      if (strict) { throw OutOfHull("value-field query outside the grid hull"); }
      if (clamped) { *clamped = true; }
    }
    const auto values = slice(k);
    double acc        = 0.0;
    const std::size_t corners = std::size_t{1} << dims;
    for (std::size_t c = 0; c < corners; ++c) {
      double weight    = 1.0;
      std::size_t flat = 0;
      for (std::size_t d = 0; d < dims; ++d) {
        const bool up = (c >> d) & 1U;
        weight *= up ? w[d] : 1.0 - w[d];
        flat += (base[d] + (up ? 1 : 0)) * grid.stride(d);
      }
      if (weight != 0.0) { acc += weight * static_cast<double>(values[flat]); }
    }
    return acc;
  }

  /// Multilinear in space, linear in time between stamps.
  [[nodiscard]] double interpolate(std::span<const double> x, double t, bool strict = false, bool * clamped = nullptr) const
  {
    if (stamps.empty()) { throw std::logic_error("interpolate on a field without stamps"); }
    const double slack = 1e-9 * std::max(1.0, std::abs(stamps.back()));
    if (t < stamps.front() - slack || t > stamps.back() + slack) {
      if (strict) { throw OutOfHull("value-field query outside the stamp range"); }
      if (clamped) { *clamped = true; }
    }
    t = std::clamp(t, stamps.front(), stamps.back());
    if (stamps.size() == 1) { return interpolate_slice(0, x, strict, clamped); }
    auto it = std::upper_bound(stamps.begin(), stamps.end(), t);
    std::size_t k = it == stamps.end() ? stamps.size() - 1 : static_cast<std::size_t>(it - stamps.begin());
    k             = std::max<std::size_t>(k, 1);
    const double t0 = stamps[k - 1], t1 = stamps[k];
    const double a  = (t - t0) / (t1 - t0);
    const double v0 = interpolate_slice(k - 1, x, strict, clamped);
    if (a == 0.0) { return v0; }
    const double v1 = interpolate_slice(k, x, strict, clamped);
    if (a == 1.0) { return v1; }
    return (1.0 - a) * v0 + a * v1;
  }

  [[nodiscard]] bool in_hull(std::span<const double> x) const
  {
    for (std::size_t d = 0; d < grid.dims(); ++d) {
      const auto & a = grid.axis(d);
      if (!a.periodic && (x[d] < a.min || x[d] > a.max)) { return false; }
    }
    return true;
  }
};

}  // namespace hjreach
