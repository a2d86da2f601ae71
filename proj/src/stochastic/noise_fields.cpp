#include "wz/stochastic/noise_fields.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wz/torus/spectral.hpp"

namespace wz {
namespace {

void require_channels(const NoiseBasis& basis, std::span<const double> w) {
  if (w.size() != basis.channel_count())
    throw std::invalid_argument("noise field: channel count does not match the basis");
}

}  // namespace

ScalarField theta_field(const NoiseBasis& basis, std::span<const double> eta) {
  require_channels(basis, eta);
  return from_spectral(basis.theta_spectral(eta));
}

ScalarField w_field(const NoiseBasis& basis, std::span<const double> beta) {
  require_channels(basis, beta);
  return from_spectral(basis.theta_spectral(beta));
}

VectorField b_field(const NoiseBasis& basis, std::span<const double> beta) {
  require_channels(basis, beta);
  VectorField b = biot_savart(basis.theta_spectral(beta));
  b *= -1.0;
  return b;
}

double theta_gradient_sup(const NoiseBasis& basis, std::span<const double> eta) {
  require_channels(basis, eta);
  const VectorField g = gradient(basis.theta_spectral(eta));
  return g.max_norm();
}

}  // namespace wz
