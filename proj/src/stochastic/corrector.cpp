#include "wz/stochastic/corrector.hpp"

namespace wz {

Vec2 self_advection_at(const NoiseBasis& basis, std::size_t k, const TorusPoint& p) {
  return basis.sigma_jacobian_at(k, p).apply(basis.sigma_at(k, p));
}

Vec2 corrector_at(const NoiseBasis& basis, const TorusPoint& p) {
  Vec2 c;
  for (std::size_t k = 0; k < basis.channel_count(); ++k) c += self_advection_at(basis, k, p);
  return 0.5 * c;
}

CorrectorField corrector(const NoiseBasis& basis) {
  const Grid& g = basis.grid();
  CorrectorField out{VectorField(g)};
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) {
      const Vec2 c = corrector_at(basis, {i * g.h(), j * g.h()});
      out.c.u1(i, j) = c.x;
      out.c.u2(i, j) = c.y;
    }
  out.max_norm = out.c.max_norm();
  return out;
}

}  // namespace wz
