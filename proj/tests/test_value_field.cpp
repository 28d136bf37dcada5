#include <gtest/gtest.h>

#include "support.hpp"

using namespace hjreach;

namespace {

ValueField affine_field()
{
  GridSpec grid({Axis{0.0, 1.0, 5, false}, Axis{-2.0, 2.0, 9, false}, Axis{1.0, 1.5, 3, false}});
  ValueField f{grid, {0.0, 0.5, 2.0}, std::vector<float>(3 * grid.size())};
  for (std::size_t k = 0; k < 3; ++k) {
    auto s = f.slice(k);
    std::array<double, 3> x{};
    for (std::size_t i = 0; i < grid.size(); ++i) {
      grid.coords(i, x);
      s[i] = static_cast<float>(0.5 * x[0] - 0.25 * x[1] + 2.0 * x[2] + 0.5 * f.stamps[k] + x[0] * x[1] * 0.125);
    }
  }
  return f;
}

double affine_exact(const std::array<double, 3> & x, double t) { return 0.5 * x[0] - 0.25 * x[1] + 2.0 * x[2] + 0.5 * t + x[0] * x[1] * 0.125; }

}  // namespace

TEST(ValueField, MultilinearIsExactForMultilinearData)
{
  const auto f = affine_field();
  auto rng     = hjreach::testing::make_rng(23);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const std::array<double, 3> x{u01(rng), -2.0 + 4.0 * u01(rng), 1.0 + 0.5 * u01(rng)};
    const double t = 2.0 * u01(rng);
    EXPECT_NEAR(f.interpolate(x, t), affine_exact(x, t), 2e-6);
  }
}

TEST(ValueField, NodesReturnStoredValues)
{
  const auto f = affine_field();
  std::array<double, 3> x{};
  for (std::size_t i = 0; i < f.grid.size(); ++i) {
    f.grid.coords(i, x);
    EXPECT_EQ(f.interpolate_slice(1, x), static_cast<double>(f.slice(1)[i]));
    EXPECT_EQ(f.interpolate(x, 0.5), static_cast<double>(f.slice(1)[i]));
  }
}

TEST(ValueField, ClampsOutsideHullUnlessStrict)
{
  const auto f = affine_field();
  const std::array<double, 3> out{1.5, 0.0, 1.2}, edge{1.0, 0.0, 1.2};
  bool clamped = false;
  EXPECT_DOUBLE_EQ(f.interpolate(out, 0.5, false, &clamped), f.interpolate(edge, 0.5));
  EXPECT_TRUE(clamped);
  EXPECT_THROW((void)f.interpolate(out, 0.5, true), OutOfHull);
  EXPECT_FALSE(f.in_hull(out));
  EXPECT_TRUE(f.in_hull(edge));
  clamped = false;
  EXPECT_DOUBLE_EQ(f.interpolate(edge, 3.0, false, &clamped), f.interpolate(edge, 2.0));
  EXPECT_TRUE(clamped);
  EXPECT_THROW((void)f.interpolate(edge, -0.1, true), OutOfHull);
  clamped = false;
  (void)f.interpolate(edge, 2.0, true, &clamped);
  EXPECT_FALSE(clamped);
}

TEST(ValueField, PeriodicAxisWraps)
{
  GridSpec grid({Axis{0.0, 2.0 * std::numbers::pi, 13, true}});
  ValueField f{grid, {0.0}, {}};
  for (std::size_t i = 0; i < grid.size(); ++i) { f.data.push_back(static_cast<float>(std::cos(grid.axis(0).coord(i)))); }
  for (double x : {0.3, 1.7, 4.0}) {
    const std::array<double, 1> a{x}, b{x + 2.0 * std::numbers::pi}, c{x - 4.0 * std::numbers::pi};
    EXPECT_NEAR(f.interpolate_slice(0, a), f.interpolate_slice(0, b), 1e-12);
    EXPECT_NEAR(f.interpolate_slice(0, a), f.interpolate_slice(0, c), 1e-12);
  }
  const std::array<double, 1> far{100.0};
  EXPECT_NO_THROW((void)f.interpolate_slice(0, far, true));
}

TEST(ValueField, LinearInTimeBetweenStamps)
{
  GridSpec grid({Axis{0.0, 1.0, 2, false}});
  ValueField f{grid, {0.0, 1.0, 3.0}, {0.0F, 0.0F, 1.0F, 1.0F, 5.0F, 5.0F}};
  const std::array<double, 1> x{0.4};
  EXPECT_DOUBLE_EQ(f.interpolate(x, 0.25), 0.25);
  EXPECT_DOUBLE_EQ(f.interpolate(x, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(f.interpolate(x, 2.0), 3.0);
  EXPECT_DOUBLE_EQ(f.interpolate(x, 3.0), 5.0);
}

TEST(ValueField, GridSpecInvariants)
{
  const Axis a{0.8090733, 1.0293733, 16, false};
  EXPECT_NEAR(a.spacing() * 15.0, a.max - a.min, 1e-12);
  EXPECT_EQ(a.coord(15), a.max);
  EXPECT_THROW(GridSpec({Axis{0.0, 1.0, 1, false}}), std::invalid_argument);
  EXPECT_THROW(GridSpec({Axis{1.0, 1.0, 5, false}}), std::invalid_argument);
  EXPECT_THROW(GridSpec(std::vector<Axis>{}), std::invalid_argument);
  GridSpec g({Axis{0.0, 1.0, 3, false}, Axis{0.0, 1.0, 4, false}});
  std::array<std::size_t, 2> idx{};
  g.index(7, idx);
  EXPECT_EQ(idx[0], 1U);
  EXPECT_EQ(idx[1], 3U);
  EXPECT_EQ(g.flat(idx), 7U);
  EXPECT_EQ(g.stride(0), 4U);
}

TEST(ValueField, MatchesIndependentTrilinearOracle)
{
  GridSpec grid({Axis{0.0, 2.0, 3, false}, Axis{-1.0, 1.0, 3, false}, Axis{5.0, 6.0, 3, false}});
  auto rng = hjreach::testing::make_rng(29);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  ValueField f{grid, {0.0}, std::vector<float>(grid.size())};
  for (auto & v : f.data) { v = static_cast<float>(u01(rng) - 0.5); }
  const auto at = [&](int i, int j, int k) { return static_cast<double>(f.data[static_cast<std::size_t>(9 * i + 3 * j + k)]); };
  for (int n = 0; n < 2000; ++n) {
    const std::array<double, 3> x{2.0 * u01(rng), -1.0 + 2.0 * u01(rng), 5.0 + u01(rng)};
    // cell lookup and nested 1D lerps, coded from scratch
    const double u = x[0] / 1.0, v = (x[1] + 1.0) / 1.0, w = (x[2] - 5.0) / 0.5;
    const int i = std::min(1, static_cast<int>(u)), j = std::min(1, static_cast<int>(v)), k = std::min(1, static_cast<int>(w));
    const double a = u - i, b = v - j, c = w - k;
    const auto lerp = [](double p, double q, double t) { return p + (q - p) * t; };
    const double c00 = lerp(at(i, j, k), at(i + 1, j, k), a), c10 = lerp(at(i, j + 1, k), at(i + 1, j + 1, k), a);
    const double c01 = lerp(at(i, j, k + 1), at(i + 1, j, k + 1), a), c11 = lerp(at(i, j + 1, k + 1), at(i + 1, j + 1, k + 1), a);
    const double expect = lerp(lerp(c00, c10, b), lerp(c01, c11, b), c);
    EXPECT_NEAR(f.interpolate_slice(0, x), expect, 1e-6);
  }
}
