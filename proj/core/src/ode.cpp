#include "ode.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>

namespace finsler::detail {

namespace odeint = boost::numeric::odeint;

OdeStop integrate_checked(const OdeRhs& rhs, OdeState& state, double t0, double t1, double tol,
                          const OdeObserver& observer, double& t_reached, double initial_step) {
  auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_dopri5<OdeState>());
  const double dir = t1 >= t0 ? 1.0 : -1.0;
  double t = t0;
  double dt = initial_step != 0.0 ? dir * std::abs(initial_step) : (t1 - t0) / 64.0;
  t_reached = t0;
  if (t1 == t0) return OdeStop::finished;
  const auto system = [&rhs](const OdeState& x, OdeState& dxdt, double tt) { rhs(x, dxdt, tt); };
  const double floor = 1e-14 * std::max(1.0, std::max(std::abs(t0), std::abs(t1)));
  while (dir * (t1 - t) > 0.0) {
    if (dir * (t + dt - t1) > 0.0) dt = t1 - t;
    const odeint::controlled_step_result res = stepper.try_step(system, state, t, dt);
    if (res == odeint::success) {
      t_reached = t;
      if (!observer(t, state)) return OdeStop::observer;
    } else if (std::abs(dt) < floor) {
      return OdeStop::underflow;
    }
  }
  return OdeStop::finished;
}

}  // namespace finsler::detail
