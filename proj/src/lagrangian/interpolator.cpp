#include "wz/lagrangian/interpolator.hpp"

#include <cmath>

namespace wz {

std::array<double, 4> cubic_weights(double t) {
  const double tm1 = t - 1.0, tm2 = t - 2.0, tp1 = t + 1.0;
  return {-t * tm1 * tm2 / 6.0, tp1 * tm1 * tm2 / 2.0, -tp1 * t * tm2 / 2.0, tp1 * t * tm1 / 6.0};
}

CubicStencil::CubicStencil(const Grid& grid, const TorusPoint& p) {
  const int n = grid.n();
  const double sx = p.x * n, sy = p.y * n;
  int ix = static_cast<int>(std::floor(sx));
  int iy = static_cast<int>(std::floor(sy));
  wx = cubic_weights(sx - ix);
  wy = cubic_weights(sy - iy);
  for (int a = 0; a < 4; ++a) {
    i[a] = ((ix - 1 + a) % n + n) % n;
    j[a] = ((iy - 1 + a) % n + n) % n;
  }
}

double Interpolator::operator()(const TorusPoint& p) const {
  const Grid& g = field_->grid();
  return CubicStencil(g, p).apply(field_->values().data(), g.n());
}

Vec2 VectorInterpolator::operator()(const TorusPoint& p) const {
  const Grid& g = field_->grid();
  const CubicStencil s(g, p);
  return {s.apply(field_->u1.values().data(), g.n()), s.apply(field_->u2.values().data(), g.n())};
}

}  // namespace wz
