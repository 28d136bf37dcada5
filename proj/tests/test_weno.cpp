#include <gtest/gtest.h>

#include "support.hpp"

using namespace hjreach;

namespace {

struct Derivs
{
  std::vector<double> left, right;
};

Derivs derivatives_1d(const GridSpec & grid, const std::vector<double> & phi, std::size_t dim = 0)
{
  Derivs d{std::vector<double>(grid.size()), std::vector<double>(grid.size())};
  weno5_derivatives(grid, phi, dim, d.left, d.right);
  return d;
}

/// Max interior error of both one-sided derivatives of sin(x) on [0, 2 pi), periodic.
double sine_error(std::size_t cells)
{
  GridSpec grid({Axis{0.0, 2.0 * std::numbers::pi, cells + 1, true}});
  const auto phi = sample_grid(grid, [](const double * x) { return std::sin(x[0]); });
  const auto d   = derivatives_1d(grid, phi);
  double err     = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double exact = std::cos(grid.axis(0).coord(i));
    err = std::max({err, std::abs(d.left[i] - exact), std::abs(d.right[i] - exact)});
  }
  return err;
}

}  // namespace

TEST(Weno, LinearFieldIsExact)
{
  GridSpec grid({Axis{-1.0, 2.0, 9, false}, Axis{0.0, 1.0, 8, false}, Axis{3.0, 5.0, 7, false}});
  const auto phi = sample_grid(grid, [](const double * x) { return 0.3 - 1.7 * x[0] + 2.5 * x[1] + 0.25 * x[2]; });
  const std::array<double, 3> slope{-1.7, 2.5, 0.25};
  for (std::size_t d = 0; d < 3; ++d) {
    const auto r = derivatives_1d(grid, phi, d);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      EXPECT_NEAR(r.left[i], slope[d], 1e-12);
      EXPECT_NEAR(r.right[i], slope[d], 1e-12);
    }
  }
}

TEST(Weno, QuarticInteriorPrecision)
{
  const auto poly  = [](double x) { return 0.5 + x - 0.75 * x * x + 0.2 * x * x * x + 0.1 * x * x * x * x; };
  const auto dpoly = [](double x) { return 1.0 - 1.5 * x + 0.6 * x * x + 0.4 * x * x * x; };
  GridSpec grid({Axis{0.5, 1.5, 1001, false}});
  const auto phi = sample_grid(grid, [&](const double * x) { return poly(x[0]); });
  const auto d   = derivatives_1d(grid, phi);
  for (std::size_t i = 3; i + 3 < grid.size(); ++i) {
    const double exact = dpoly(grid.axis(0).coord(i));
    EXPECT_NEAR(d.left[i], exact, 1e-10 * std::abs(exact)) << "node " << i;
    EXPECT_NEAR(d.right[i], exact, 1e-10 * std::abs(exact)) << "node " << i;
  }
}

TEST(Weno, FifthOrderOnSmoothSine)
{
  const double e1 = sine_error(40), e2 = sine_error(80);
  EXPECT_LT(e1, 1e-4);
  EXPECT_GE(e1 / e2, 24.0) << e1 << " -> " << e2;
}

TEST(Weno, PeriodicGhostsWrap)
{
  std::vector<double> line(7 + 6, 0.0);
  for (std::size_t i = 0; i < 7; ++i) { line[3 + i] = static_cast<double>(i * i); }
  line[3 + 6] = line[3];  // endpoints coincide
  fill_ghosts(line, true);
  EXPECT_DOUBLE_EQ(line[2], line[3 + 5]);
  EXPECT_DOUBLE_EQ(line[0], line[3 + 3]);
  EXPECT_DOUBLE_EQ(line[10], line[3 + 1]);
  EXPECT_DOUBLE_EQ(line[12], line[3 + 3]);
}

TEST(Weno, LinearExtrapolationGhosts)
{
  std::vector<double> line(8 + 6, 0.0);
  for (std::size_t i = 0; i < 8; ++i) { line[3 + i] = 2.0 * static_cast<double>(i) * static_cast<double>(i); }
  fill_ghosts(line, false);
  EXPECT_DOUBLE_EQ(line[2], 0.0 - 2.0);
  EXPECT_DOUBLE_EQ(line[0], 0.0 - 6.0);
  const double last = line[10], dr = line[10] - line[9];
  EXPECT_DOUBLE_EQ(line[13], last + 3.0 * dr);
}

TEST(Weno, UpwindSidesAtAKink)
{
  GridSpec grid({Axis{-1.0, 1.0, 21, false}});
  const auto phi = sample_grid(grid, [](const double * x) { return std::abs(x[0]); });
  const auto d   = derivatives_1d(grid, phi);
  // node 10 is the kink: the left derivative sees slope -1, the right one +1
  EXPECT_NEAR(d.left[10], -1.0, 1e-6);
  EXPECT_NEAR(d.right[10], 1.0, 1e-6);
  for (std::size_t i = 0; i < 7; ++i) { EXPECT_NEAR(d.left[i], -1.0, 1e-12); }
}
