#include "wz/systems/kunita.hpp"

#include <cmath>
#include <stdexcept>

#include "wz/lagrangian/interpolator.hpp"
#include "wz/torus/spectral.hpp"

namespace wz {

ScalarField kunita_zeta(const SmallScaleRecord& record, double t) {
  const VelocityHistory& hist = record.large_velocity;
  if (record.theta.size() != hist.size() || hist.size() == 0)
    throw std::invalid_argument("kunita_zeta: velocity and Theta records differ");
  const double dt = hist.dt();
  const long last = std::lround((t - hist.start()) / dt);
  if (last < 0 || static_cast<std::size_t>(last) >= hist.size() ||
      std::abs(hist.start() + last * dt - t) > 1e-9 * dt)
    throw std::out_of_range("kunita_zeta: t is not a recorded time");

  const Grid grid = record.theta.front().grid();
  const double inv_eps2 = 1.0 / (record.epsilon * record.epsilon);
  std::vector<VectorField> grad;
  grad.reserve(last + 1);
  for (long j = 0; j <= last; ++j) grad.push_back(gradient(record.theta[j]));

  ScalarField out(grid);
  const double h = grid.h();
  for (int i = 0; i < grid.n(); ++i)
    for (int jn = 0; jn < grid.n(); ++jn) {
      TorusPoint x{i * h, jn * h};
      double sum = 0.0;
      for (long j = last; j >= 0; --j) {
        const double s = hist.start() + j * dt;
        const Vec2 u = VectorInterpolator(hist.field(j))(x);
        const Vec2 g = VectorInterpolator(grad[j])(x);
        const double weight = (j == last || j == 0) ? 0.5 : 1.0;
        if (last > 0) sum += weight * std::exp(-(t - s) * inv_eps2) * dot(u, g);
        if (j > 0) {
          const double s0 = s - dt;
          const Vec2 v1 = hist.velocity(s, x);
          const TorusPoint xp = x.shifted(-dt * v1);
          const Vec2 v0 = hist.velocity(s0, xp);
          x = x.shifted(-0.5 * dt * (v0 + v1));
        }
      }
      out(i, jn) = -dt * sum;
    }
  return out;
}

}  // namespace wz
