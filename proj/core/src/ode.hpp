#pragma once

// Adaptive Dormand-Prince stepping with a per-step acceptance hook.

#include <functional>
#include <vector>

namespace finsler::detail {

using OdeState = std::vector<double>;
using OdeRhs = std::function<void(const OdeState&, OdeState&, double)>;
/// Called after every accepted step; returning false stops the integration.
using OdeObserver = std::function<bool(double, const OdeState&)>;

enum class OdeStop { finished, observer, underflow };

/// Integrates from t0 to t1 (either direction) at absolute and relative
/// tolerance tol. `t_reached` is the time of the last accepted state.
OdeStop integrate_checked(const OdeRhs& rhs, OdeState& state, double t0, double t1, double tol,
                          const OdeObserver& observer, double& t_reached, double initial_step = 0.0);

}  // namespace finsler::detail
