#include <gtest/gtest.h>

#include "support.hpp"

using namespace hjreach;

namespace {

DynamicsParams castalia_normalized()
{
  static const auto p = normalized_dynamics(load_config(hjreach::testing::config_path("castalia_low.ini")).scenario);
  return p;
}

const std::array<Interval, 4> kBox{Interval{0.8084348, 1.0287348}, Interval{-0.2861824, 1.3355176}, Interval{-1.6024707, -1.1162707},
                                   Interval{-0.0533, 0.1533}};

double dot(std::span<const double> q, const PlanarDerivative & f) { return q[0] * f.drho + q[1] * f.dvrho + q[2] * f.dvt + q[3] * f.ddm; }

/// -min over an (alpha, thrust) lattice of q . f.
double brute_force_h(const DynamicsParams & p, const PlanarState & s, std::span<const double> q, std::size_t n_alpha, std::size_t n_thrust)
{
  double best = std::numeric_limits<double>::infinity();
  for (const auto & u : planar_control_lattice(p.max_thrust, n_alpha, n_thrust)) { best = std::min(best, dot(q, planar_rhs(p, s, u))); }
  return -best;
}

}  // namespace

TEST(Hamiltonian, ThrustDirectionReachesEnvelope)
{
  auto rng = hjreach::testing::make_rng(5);
  std::normal_distribution<double> n01(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double a = n01(rng), b = n01(rng), c = n01(rng);
    const auto d   = optimal_thrust_direction(a, b, c);
    const double v = a * std::cos(d.alpha) + std::sin(d.alpha) * (b * std::sin(d.delta) + c * std::cos(d.delta));
    EXPECT_NEAR(v, -std::sqrt(a * a + b * b + c * c), 1e-12);
    EXPECT_LE(std::abs(d.delta), std::numbers::pi / 2.0 + 1e-15);
  }
}

TEST(Hamiltonian, ThrustDirectionDegenerateCostates)
{
  EXPECT_DOUBLE_EQ(optimal_thrust_direction(0.0, 0.0, 0.0).value, 0.0);
  const auto d = optimal_thrust_direction(0.0, 2.0, 0.0);
  EXPECT_NEAR(std::cos(d.alpha) * 0.0 + std::sin(d.alpha) * 2.0 * std::sin(d.delta), -2.0, 1e-15);
  const auto e = optimal_thrust_direction(-3.0, 0.0, 0.0);
  EXPECT_NEAR(-3.0 * std::cos(e.alpha), -3.0, 1e-15);
  const auto pl = optimal_planar_thrust_angle(0.6, -0.8);
  EXPECT_NEAR(0.6 * std::cos(pl.alpha) - 0.8 * std::sin(pl.alpha), -1.0, 1e-15);
}

TEST(Hamiltonian, MatchesControlLatticeOracle)
{
  const auto p = castalia_normalized();
  auto rng     = hjreach::testing::make_rng(13);
  std::uniform_real_distribution<double> u11(-1.0, 1.0);
  double gap = 0.0, coarse_sum = 0.0, fine_sum = 0.0;
  for (int i = 0; i < 100; ++i) {
    std::array<double, 4> x{}, q{};
    for (int d = 0; d < 4; ++d) {
      x[d] = std::uniform_real_distribution<double>(kBox[d].lo, kBox[d].hi)(rng);
      q[d] = u11(rng);
    }
    q[3] *= 1e5;  // mass costates large enough for both thrust branches
    const auto s    = PlanarState::from(x.data());
    const double h  = planar_hamiltonian(p, s, q);
    const double bf = brute_force_h(p, s, q, 400, 100);
    const double bf4 = brute_force_h(p, s, q, 1600, 400);
    EXPECT_GE(h, bf - 1e-12);  // the analytic minimum is never above a lattice minimum
    EXPECT_GE(h, bf4 - 1e-12);
    gap = std::max(gap, h - bf);
    coarse_sum += h - bf;
    fine_sum += h - bf4;
  }
  EXPECT_LE(gap, 1e-3);
  EXPECT_GT(coarse_sum, 0.0);
  EXPECT_GE(coarse_sum, 10.0 * fine_sum);
}

TEST(Hamiltonian, OptimalControlIsMinimizer)
{
  const auto p = castalia_normalized();
  auto rng     = hjreach::testing::make_rng(17);
  std::uniform_real_distribution<double> u11(-1.0, 1.0);
  const auto lattice = planar_control_lattice(p.max_thrust, 64, 5);
  for (int i = 0; i < 200; ++i) {
    std::array<double, 4> x{}, q{};
    for (int d = 0; d < 4; ++d) {
      x[d] = std::uniform_real_distribution<double>(kBox[d].lo, kBox[d].hi)(rng);
      q[d] = u11(rng);
    }
    q[3] *= 1e5;
    const auto s   = PlanarState::from(x.data());
    const auto u   = optimal_planar_control(p, s, q);
    const double v = dot(q, planar_rhs(p, s, u));
    EXPECT_NEAR(-v, planar_hamiltonian(p, s, q), 1e-12);
    EXPECT_TRUE(u.thrust == 0.0 || u.thrust == p.max_thrust);
    for (const auto & w : lattice) { EXPECT_LE(v, dot(q, planar_rhs(p, s, w)) + 1e-12); }
  }
}

TEST(Hamiltonian, BangBangSwitch)
{
  const auto p = castalia_normalized();
  // switching = |q_v| / m + q_m / v_e; zero at q_m = -v_e |q_v| / m
  const double qv = 0.5, m = p.dry_mass + 0.05;
  const double q0 = -p.exhaust_velocity * qv / m;
  EXPECT_EQ(optimal_thrust_magnitude(p, qv, q0 + 1.0, 0.05), p.max_thrust);
  EXPECT_EQ(optimal_thrust_magnitude(p, qv, q0 - 1.0, 0.05), 0.0);
  EXPECT_EQ(optimal_thrust_magnitude(p, qv, q0, 0.05), p.max_thrust);
  EXPECT_NEAR(switching_function(p, qv, q0, 0.05), 0.0, 1e-15);
}

TEST(Hamiltonian, SphericalReducesToPlanar)
{
  const auto p = castalia_normalized();
  SphericalState s;
  s.rho = 0.9;
  s.vrho = 0.1;
  s.vt = -1.3;
  s.dm = 0.05;
  const std::array<double, 7> q7{0.3, 0.0, 0.0, -0.4, 0.7, 0.0, 25.0};
  const std::array<double, 4> q4{0.3, -0.4, 0.7, 25.0};
  EXPECT_NEAR(spherical_hamiltonian(p, s, q7), planar_hamiltonian(p, {0.9, 0.1, -1.3, 0.05}, q4), 1e-13);
}

TEST(Hamiltonian, DissipationBoundsPartialDerivatives)
{
  const auto p     = castalia_normalized();
  const auto alpha = planar_dissipation(p, kBox);
  auto rng         = hjreach::testing::make_rng(19);
  std::uniform_real_distribution<double> u11(-1.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    std::array<double, 4> x{}, q{};
    for (int d = 0; d < 4; ++d) {
      x[d] = std::uniform_real_distribution<double>(kBox[d].lo, kBox[d].hi)(rng);
      q[d] = u11(rng);
    }
    q[3] *= 1e5;
    const auto s = PlanarState::from(x.data());
    for (int k = 0; k < 4; ++k) {
      const double h = k == 3 ? 1e-2 : 1e-7;
      auto qp = q, qm = q;
      qp[k] += h;
      qm[k] -= h;
      const double slope = std::abs(planar_hamiltonian(p, s, qp) - planar_hamiltonian(p, s, qm)) / (2.0 * h);
      EXPECT_LE(slope, alpha[k] * (1.0 + 1e-6)) << "axis " << k;
    }
  }
}
