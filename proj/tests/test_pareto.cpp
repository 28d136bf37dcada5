#include <gtest/gtest.h>

#include "support.hpp"

using namespace hjreach;

namespace {

std::vector<std::size_t> pairwise_oracle(const std::vector<Objective> & pts, bool weak)
{
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < pts.size() && !dominated; ++j) {
      if (j == i) { continue; }
      const bool all_lt = pts[j][0] < pts[i][0] && pts[j][1] < pts[i][1];
      const bool all_le = pts[j][0] <= pts[i][0] && pts[j][1] <= pts[i][1];
      const bool any_lt = pts[j][0] < pts[i][0] || pts[j][1] < pts[i][1];
      dominated = weak ? (all_le && any_lt) : all_lt;
    }
    if (!dominated) { keep.push_back(i); }
  }
  return keep;
}

std::vector<std::size_t> sorted(std::vector<std::size_t> v)
{
  std::sort(v.begin(), v.end());
  return v;
}

/// Synthetic field w(dm, tf) = a - dm - b tf on the planar axes, constant in (rho, v_rho, v_t).
ValueField synthetic_field(double a, double b)
{
  GridSpec grid({Axis{0.9, 1.1, 2, false}, Axis{-0.1, 0.1, 2, false}, Axis{-1.5, -1.2, 2, false}, Axis{0.0, 0.1, 11, false}});
  ValueField f{grid, uniform_stamps(1.0, 11), {}};
  std::array<double, 4> x{};
  for (double t : f.stamps) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      grid.coords(i, x);
      f.data.push_back(static_cast<float>(a - x[3] - b * t));
    }
  }
  return f;
}

}  // namespace

TEST(Pareto, DefinitionExamples)
{
  const std::vector<Objective> a{{1, 2}, {2, 1}, {2, 2}};
  EXPECT_EQ(sorted(nondominated_filter(a)), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(sorted(nondominated_filter(a, true)), (std::vector<std::size_t>{0, 1}));
  const std::vector<Objective> b{{1, 1}, {2, 2}};
  EXPECT_EQ(nondominated_filter(b), (std::vector<std::size_t>{0}));
  const std::vector<Objective> c{{20, 3000}, {25, 2800}};
  EXPECT_EQ(nondominated_filter(c).size(), 2U);
  EXPECT_TRUE(nondominated_filter(std::vector<Objective>{}).empty());
  const std::vector<Objective> bad{{1.0, std::nan("")}};
  EXPECT_THROW(nondominated_filter(bad), std::invalid_argument);
}

TEST(Pareto, OrderedByFirstObjective)
{
  const std::vector<Objective> pts{{3, 1}, {1, 3}, {2, 2}, {1, 3}};
  const auto keep = nondominated_filter(pts);
  ASSERT_EQ(keep.size(), 4U);
  EXPECT_EQ(keep[0], 1U);
  EXPECT_EQ(keep[1], 3U);
  EXPECT_EQ(keep[2], 2U);
  EXPECT_EQ(keep[3], 0U);
  EXPECT_EQ(nondominated_filter(pts, true).size(), 4U);  // exact duplicates do not dominate each other
}

TEST(Pareto, MatchesPairwiseOracle)
{
  auto rng = hjreach::testing::make_rng(41);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_int_distribution<int> coarse(0, 30);
  for (int trial = 0; trial < 4; ++trial) {
    std::vector<Objective> pts(1000);
    for (auto & p : pts) {
      // half the trials on a coarse lattice so ties occur
      p = trial % 2 == 0 ? Objective{u01(rng), u01(rng)} : Objective{double(coarse(rng)), double(coarse(rng))};
    }
    for (bool weak : {false, true}) {
      const auto got = nondominated_filter(pts, weak);
      EXPECT_EQ(sorted(got), pairwise_oracle(pts, weak)) << "trial " << trial << " weak " << weak;
      for (std::size_t i : got) {
        for (std::size_t j : got) { EXPECT_FALSE(dominates(pts[i], pts[j], weak)); }
      }
    }
  }
}

TEST(Pareto, SyntheticFrontAndBisection)
{
  // feasible iff dm >= 0.08 - 0.05 tf
  const auto f = synthetic_field(0.08, 0.05);
  ScanSpec scan;
  scan.values   = linspace(0.0, 0.1, 11);
  scan.horizons = linspace(0.2, 1.0, 5);
  const auto res = mayer_front(f, {1.0, 0.0, -1.3}, scan);
  ASSERT_FALSE(res.front.empty());
  for (const auto & c : res.candidates) {
    EXPECT_LE(c.omega_hat, 0.0);
    if (c.boundary) {
      EXPECT_LE(std::abs(c.omega_hat), 1e-3);
      EXPECT_NEAR(c.j[0], 0.08 - 0.05 * c.tf, 1e-5);
    }
  }
  // the front is a staircase: less time needs more propellant (ties survive strict dominance)
  for (std::size_t i = 1; i < res.front.size(); ++i) {
    EXPECT_LE(res.front[i - 1].j[0], res.front[i].j[0]);
    if (res.front[i - 1].j[0] < res.front[i].j[0]) { EXPECT_GE(res.front[i - 1].j[1], res.front[i].j[1]); }
  }
  std::vector<Objective> obj;
  for (const auto & p : res.front) { obj.push_back(p.j); }
  EXPECT_EQ(pairwise_oracle(obj, false).size(), obj.size());
  // weak filtering leaves a strict staircase up to exact duplicates
  scan.weak      = true;
  const auto wk  = mayer_front(f, {1.0, 0.0, -1.3}, scan);
  for (std::size_t i = 1; i < wk.front.size(); ++i) {
    if (wk.front[i - 1].j == wk.front[i].j) { continue; }
    EXPECT_LT(wk.front[i - 1].j[0], wk.front[i].j[0]);
    EXPECT_GT(wk.front[i - 1].j[1], wk.front[i].j[1]);
  }
}

TEST(Pareto, FeasibilityMargin)
{
  const auto f = synthetic_field(0.08, 0.05);
  const std::array<double, 4> a{1.0, 0.0, -1.3, 0.09}, b{1.0, 0.0, -1.3, 0.01}, out{1.0, 0.0, -1.3, 0.2};
  EXPECT_TRUE(feasible(f, a, 0.0).feasible);
  EXPECT_NEAR(feasible(f, a, 0.0).margin, -0.01, 1e-7);
  EXPECT_FALSE(feasible(f, b, 0.2).feasible);
  EXPECT_THROW(feasible(f, out, 0.2), OutOfHull);
}

TEST(Pareto, EmptyResultHasDiagnostics)
{
  const auto f = synthetic_field(0.5, 0.0);  // never feasible
  ScanSpec scan;
  scan.values   = linspace(0.0, 0.1, 5);
  scan.horizons = linspace(0.0, 1.0, 3);
  const auto res = mayer_front(f, {1.0, 0.0, -1.3}, scan);
  EXPECT_TRUE(res.front.empty());
  EXPECT_TRUE(res.candidates.empty());
  EXPECT_NE(res.diagnostics.find("no feasible point"), std::string::npos);
  ScanSpec bad;
  EXPECT_THROW(mayer_front(f, {1.0, 0.0, -1.3}, bad), std::invalid_argument);
}

TEST(Pareto, CoarsePlanarFront)
{
  const auto & cp = hjreach::testing::coarse_planar();
  const auto & sc = cp.config.scenario;
  const auto r0   = sc.initial_state_normalized(0.0);
  ScanSpec scan;
  for (double v : linspace(cp.config.pareto.dm_min_kg, cp.config.pareto.dm_max_kg, cp.config.pareto.dm_points)) {
    scan.values.push_back(v / sc.norm.mass_kg);
  }
  for (double v : linspace(cp.config.pareto.tf_min_s, cp.config.pareto.tf_max_s, cp.config.pareto.tf_points)) {
    scan.horizons.push_back(sc.norm.time_to_normalized(v));
  }
  const auto res = mayer_front(cp.field, {r0.rho, r0.vrho, r0.vt}, scan);
  ASSERT_FALSE(res.front.empty()) << res.diagnostics;
  std::vector<Objective> obj;
  for (const auto & p : res.candidates) { obj.push_back(p.j); }
  EXPECT_EQ(sorted(nondominated_filter(obj)), pairwise_oracle(obj, false));
  for (const auto & p : res.front) {
    EXPECT_LE(p.omega_hat, 0.0);
    if (p.boundary) { EXPECT_LE(std::abs(p.omega_hat), 1e-3); }
  }
  // at fixed propellant, more time never hurts (checked, not assumed)
  std::size_t violations = 0;
  for (double dm : scan.values) {
    bool was = false;
    for (double tf : scan.horizons) {
      const std::array<double, 4> x{r0.rho, r0.vrho, r0.vt, dm};
      const bool now = feasible(cp.field, x, tf).feasible;
      violations += was && !now;
      was = now;
    }
  }
  EXPECT_EQ(violations, 0U);
}
