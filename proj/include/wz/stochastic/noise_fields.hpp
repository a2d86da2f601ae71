#pragma once

#include <span>

#include "wz/stochastic/noise_basis.hpp"

namespace wz {

/// Theta(x) = sum_k theta_k(x) eta_k, the OU vorticity field.
ScalarField theta_field(const NoiseBasis& basis, std::span<const double> eta);
/// W_t(x) = sum_k theta_k(x) beta^k_t.
ScalarField w_field(const NoiseBasis& basis, std::span<const double> beta);
/// B_t = -K * W_t.
VectorField b_field(const NoiseBasis& basis, std::span<const double> beta);

/// max over grid nodes of |grad Theta| (spectral gradient of the band-limited field).
double theta_gradient_sup(const NoiseBasis& basis, std::span<const double> eta);

}  // namespace wz
