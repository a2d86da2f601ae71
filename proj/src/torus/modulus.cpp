#include "wz/torus/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "wz/torus/spectral.hpp"

namespace wz {

double gamma_modulus(double r) {
  if (r < 0.0 || std::isnan(r)) throw std::invalid_argument("gamma_modulus: r must be >= 0");
  constexpr double inv_e = 1.0 / std::numbers::e;
  if (r == 0.0) return 0.0;
  if (r < inv_e) return r * (1.0 - std::log(r));
  return r + inv_e;
}

double gamma_ode_admissible_max(double lambda, double horizon) {
  return std::exp(1.0 - 2.0 * std::exp(lambda * horizon));
}

GammaOdeCheck gamma_ode_bound_check(double z0, double lambda, double horizon, int steps) {
  if (!(lambda > 0.0) || !(horizon > 0.0) || steps < 1)
    throw std::invalid_argument("gamma_ode_bound_check: need lambda > 0, T > 0, steps >= 1");
  const double zmax = gamma_ode_admissible_max(lambda, horizon);
  if (z0 < 0.0 || z0 > zmax * (1.0 + 1e-14))
    throw std::invalid_argument("gamma_ode_bound_check: z0 outside [0, exp(1 - 2 e^(lambda T))]");

  GammaOdeCheck out;
  out.times.reserve(steps + 1);
  out.trajectory.reserve(steps + 1);
  out.bound.reserve(steps + 1);
  const double dt = horizon / steps;
  auto rhs = [lambda](double z) { return lambda * gamma_modulus(std::max(z, 0.0)); };
  auto bound_at = [&](double t) {
    return z0 == 0.0 ? 0.0 : std::numbers::e * std::pow(z0, std::exp(-lambda * t));
  };
  double z = z0;
  for (int s = 0; s <= steps; ++s) {
    const double t = s * dt;
    const double b = bound_at(t);
    out.times.push_back(t);
    out.trajectory.push_back(z);
    out.bound.push_back(b);
    if (z > b * (1.0 + 1e-12)) out.bound_satisfied = false;
    if (s == steps) break;
    const double k1 = rhs(z);
    const double k2 = rhs(z + 0.5 * dt * k1);
    const double k3 = rhs(z + 0.5 * dt * k2);
    const double k4 = rhs(z + dt * k3);
    z += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return out;
}

namespace {

// Velocity of a unit point vortex at the origin: K * (h^-2 delta_0 - 1).
VectorField discrete_kernel(const Grid& grid) {
  ScalarField delta(grid);
  const double mass = static_cast<double>(grid.size());
  for (std::size_t k = 0; k < delta.size(); ++k) delta[k] = -1.0;
  delta(0, 0) += mass;
  return biot_savart(delta, false, 1e-6);
}

double shift_l1(const VectorField& kernel, int d1, int d2) {
  const Grid& g = kernel.grid();
  const int n = g.n();
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const int is = ((i + d1) % n + n) % n;
    for (int j = 0; j < n; ++j) {
      const int js = ((j + d2) % n + n) % n;
      acc += std::hypot(kernel.u1(i, j) - kernel.u1(is, js), kernel.u2(i, j) - kernel.u2(is, js));
    }
  }
  return acc * g.h() * g.h();
}

}  // namespace

double kernel_shift_l1(const Grid& grid, int d1, int d2) { return shift_l1(discrete_kernel(grid), d1, d2); }

LogLipCheck log_lip_kernel_check(const Grid& grid, const std::vector<std::pair<int, int>>& offsets) {
  const VectorField kernel = discrete_kernel(grid);
  LogLipCheck out;
  for (auto [d1, d2] : offsets) {
    LogLipPair p;
    p.distance = geodesic_distance({0.0, 0.0}, {d1 * grid.h(), d2 * grid.h()});
    if (p.distance > 0.0) {
      p.integral = shift_l1(kernel, d1, d2);
      p.ratio = p.integral / gamma_modulus(p.distance);
    }
    out.max_ratio = std::max(out.max_ratio, p.ratio);
    out.pairs.push_back(p);
  }
  return out;
}

LogLipCheck log_lip_kernel_check(int samples, const Grid& grid, std::uint64_t seed, int base_n) {
  if (base_n <= 0) base_n = grid.n();
  if (grid.n() % base_n != 0) throw std::invalid_argument("log_lip_kernel_check: grid must refine base_n");
  const int refine = grid.n() / base_n;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> offset(-base_n / 2, base_n / 2);
  std::vector<std::pair<int, int>> offsets;
  while (static_cast<int>(offsets.size()) < samples) {
    const int a = offset(rng);
    const int b = offset(rng);
    const double r = std::hypot(a, b) / base_n;
    if (r < 1.0 / base_n || r > 0.5) continue;
    offsets.emplace_back(a * refine, b * refine);
  }
  return log_lip_kernel_check(grid, offsets);
}

}  // namespace wz
