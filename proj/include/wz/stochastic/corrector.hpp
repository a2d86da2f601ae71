#pragma once

#include "wz/stochastic/noise_basis.hpp"

namespace wz {

/// Ito-Stratonovich drift c = 1/2 sum_k (sigma_k . grad) sigma_k, tabulated on the basis grid.
struct CorrectorField {
  VectorField c;
  double max_norm = 0.0;

  /// True when c is zero to rounding; steppers then skip it.
  bool vanishes(double tol = 1e-13) const { return max_norm <= tol; }
};

/// (sigma_k . grad) sigma_k at p from the closed-form Jacobian.
Vec2 self_advection_at(const NoiseBasis& basis, std::size_t k, const TorusPoint& p);

/// c(p) summed over all channels.
Vec2 corrector_at(const NoiseBasis& basis, const TorusPoint& p);

CorrectorField corrector(const NoiseBasis& basis);

}  // namespace wz
