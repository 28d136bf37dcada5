#pragma once

#include <vector>

#include <boost/numeric/odeint.hpp>

namespace hjreach {

struct IntegratorTolerance
{
  double relative = 1e-10;
  double absolute = 1e-12;
};

/// Adaptive Dormand-Prince 5(4) integration of `system(x, dxdt, t)` from t0 to t1.
template<typename System>
void integrate_adaptive(System && system, std::vector<double> & x, double t0, double t1, IntegratorTolerance tol = {})
{
  namespace odeint = boost::numeric::odeint;
  if (t1 == t0) { return; }
  auto stepper = odeint::make_controlled(tol.absolute, tol.relative, odeint::runge_kutta_dopri5<std::vector<double>>());
  odeint::integrate_adaptive(stepper, system, x, t0, t1, (t1 - t0) / 16.0);
}

}  // namespace hjreach
