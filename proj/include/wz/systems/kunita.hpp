#pragma once

#include <vector>

#include "wz/lagrangian/flow.hpp"

namespace wz {

/// Records of a two-scale run at every step: u_L and Theta.
struct SmallScaleRecord {
  double epsilon = 1.0;
  VelocityHistory large_velocity;
  std::vector<ScalarField> theta;

  SmallScaleRecord(double eps, double t0, double dt) : epsilon(eps), large_velocity(t0, dt) {}
};

/// zeta(t, x) from the mild representation along backward characteristics,
///   zeta(t, x) = -int_{t0}^t e^{-(t - s)/eps^2} (u_L . grad Theta)(s, X_s) ds,
/// where X solves dX/ds = u_L(s, X) with X_t = x. The integral is a trapezoid
/// over the record times and X is integrated backward with Heun steps.
ScalarField kunita_zeta(const SmallScaleRecord& record, double t);

}  // namespace wz
