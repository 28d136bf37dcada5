#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "grid.hpp"

namespace hjreach {

namespace detail {

inline double weno5_combine(double v1, double v2, double v3, double v4, double v5)
{
  const double s1 = 13.0 / 12.0 * (v1 - 2.0 * v2 + v3) * (v1 - 2.0 * v2 + v3) + 0.25 * (v1 - 4.0 * v2 + 3.0 * v3) * (v1 - 4.0 * v2 + 3.0 * v3);
  const double s2 = 13.0 / 12.0 * (v2 - 2.0 * v3 + v4) * (v2 - 2.0 * v3 + v4) + 0.25 * (v2 - v4) * (v2 - v4);
  const double s3 = 13.0 / 12.0 * (v3 - 2.0 * v4 + v5) * (v3 - 2.0 * v4 + v5) + 0.25 * (3.0 * v3 - 4.0 * v4 + v5) * (3.0 * v3 - 4.0 * v4 + v5);
  const double vmax = std::max({v1 * v1, v2 * v2, v3 * v3, v4 * v4, v5 * v5});
  const double eps  = 1e-6 * vmax + 1e-99;
  const double a1   = 0.1 / ((s1 + eps) * (s1 + eps));
  const double a2   = 0.6 / ((s2 + eps) * (s2 + eps));
  const double a3   = 0.3 / ((s3 + eps) * (s3 + eps));
  const double sum  = a1 + a2 + a3;
  const double p1   = v1 / 3.0 - 7.0 / 6.0 * v2 + 11.0 / 6.0 * v3;
  const double p2   = -v2 / 6.0 + 5.0 / 6.0 * v3 + v4 / 3.0;
  const double p3   = v3 / 3.0 + 5.0 / 6.0 * v4 - v5 / 6.0;
  return (a1 * p1 + a2 * p2 + a3 * p3) / sum;
}

}  // namespace detail

/// Fills the three ghost cells on both ends of a padded line
/// (`line.size() == n + 6`, interior starting at index 3).
inline void fill_ghosts(std::span<double> line, bool periodic)
{
  constexpr std::size_t g = GridSpec::ghost_width;
  const std::size_t n     = line.size() - 2 * g;
  if (periodic) {
    // node 0 and node n-1 coincide
    for (std::size_t k = 1; k <= g; ++k) {
      line[g - k]         = line[g + n - 1 - k];
      line[g + n - 1 + k] = line[g + k];
    }
    return;
  }
  const double dl = line[g + 1] - line[g];
  const double dr = line[g + n - 1] - line[g + n - 2];
  for (std::size_t k = 1; k <= g; ++k) {
    line[g - k]         = line[g] - static_cast<double>(k) * dl;
    line[g + n - 1 + k] = line[g + n - 1] + static_cast<double>(k) * dr;
  }
}

/// One-sided WENO5 derivatives on a padded line; `left` and `right` receive n values.
inline void weno5_line(std::span<const double> line, double h, std::span<double> left, std::span<double> right)
{
  constexpr std::size_t g = GridSpec::ghost_width;
  const std::size_t n     = line.size() - 2 * g;
  std::array<double, 64> stack{};
  std::vector<double> heap;
  std::span<double> d;
  if (n + 5 <= stack.size()) {
    d = std::span<double>(stack).first(n + 5);
  } else {
    heap.resize(n + 5);
    d = heap;
  }
  // d[j] = (u[j+1] - u[j]) / h over the padded line
  const double inv_h = 1.0 / h;
  for (std::size_t j = 0; j + 1 < line.size(); ++j) { d[j] = (line[j + 1] - line[j]) * inv_h; }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = i + g;  // padded index of node i
    left[i]  = detail::weno5_combine(d[c - 3], d[c - 2], d[c - 1], d[c], d[c + 1]);
    right[i] = detail::weno5_combine(d[c + 2], d[c + 1], d[c], d[c - 1], d[c - 2]);
  }
}

/// Left and right WENO5 derivatives of `phi` along axis `dim`.
inline void weno5_derivatives(const GridSpec & grid, std::span<const double> phi, std::size_t dim, std::span<double> left,
                              std::span<double> right)
{
  const auto & axis       = grid.axis(dim);
  const std::size_t n     = axis.points;
  const std::size_t s     = grid.stride(dim);
  const std::size_t lines = grid.size() / n;
  constexpr std::size_t g = GridSpec::ghost_width;
  std::vector<double> line(n + 2 * g), l(n), r(n);
  for (std::size_t k = 0; k < lines; ++k) {
    const std::size_t outer = k / s, inner = k % s;
    const std::size_t base  = outer * s * n + inner;
    for (std::size_t i = 0; i < n; ++i) { line[g + i] = phi[base + i * s]; }
    fill_ghosts(line, axis.periodic);
    weno5_line(line, axis.spacing(), l, r);
    for (std::size_t i = 0; i < n; ++i) {
      left[base + i * s]  = l[i];
      right[base + i * s] = r[i];
    }
  }
}

}  // namespace hjreach
