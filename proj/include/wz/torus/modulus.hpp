#pragma once

#include <cstdint>
#include <vector>

#include "wz/torus/grid.hpp"

namespace wz {

/// Concave log-Lipschitz modulus: r (1 - log r) on (0, 1/e), r + 1/e beyond,
/// gamma(0) = 0. Throws std::invalid_argument for negative r.
double gamma_modulus(double r);

/// Largest z0 for which the comparison bound z_t <= e z0^(exp(-lambda t)) is claimed.
double gamma_ode_admissible_max(double lambda, double horizon);

struct GammaOdeCheck {
  std::vector<double> times;
  std::vector<double> trajectory;  ///< z at each time (RK4)
  std::vector<double> bound;       ///< e z0^(exp(-lambda t))
  bool bound_satisfied = true;
};

/// Integrates dz/dt = lambda gamma(z) from z0 with classical RK4 and checks the
/// comparison bound at every step. z0 must lie in [0, exp(1 - 2 e^(lambda T))].
GammaOdeCheck gamma_ode_bound_check(double z0, double lambda, double horizon, int steps);

struct LogLipPair {
  double distance = 0.0;
  double integral = 0.0;  ///< int |K(x - y) - K(x' - y)| dy
  double ratio = 0.0;     ///< integral / gamma(distance)
};

struct LogLipCheck {
  std::vector<LogLipPair> pairs;
  double max_ratio = 0.0;
};

/// L1 difference of the discrete Biot-Savart kernel (velocity of a unit point
/// vortex on the grid) and its translate by the node offset (d1, d2).
double kernel_shift_l1(const Grid& grid, int d1, int d2);

/// Samples random node offsets on a base grid of size base_n (offset length in
/// [1/base_n, 1/2]) and evaluates them on `grid`, whose size must be a multiple of
/// base_n; the same seed therefore yields the same physical pairs at every
/// refinement. Returns the ratios and their maximum (the fitted constant).
LogLipCheck log_lip_kernel_check(int samples, const Grid& grid, std::uint64_t seed, int base_n = 0);

/// Ratio for explicit physical offsets expressed in nodes of `grid`.
LogLipCheck log_lip_kernel_check(const Grid& grid, const std::vector<std::pair<int, int>>& offsets);

}  // namespace wz
