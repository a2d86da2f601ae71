#include "wz/torus/norms.hpp"

#include <algorithm>
#include <cmath>

namespace wz {
namespace {

template <class Magnitude>
double integrate_norm(std::size_t count, double weight, Norm p, Magnitude&& mag) {
  double acc = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const double v = mag(k);
    switch (p) {
      case Norm::L1: acc += v; break;
      case Norm::L2: acc += v * v; break;
      case Norm::LInf: acc = std::max(acc, v); break;
    }
  }
  switch (p) {
    case Norm::L1: return acc * weight;
    case Norm::L2: return std::sqrt(acc * weight);
    case Norm::LInf: return acc;
  }
  return acc;
}

}  // namespace

double lp_norm(const ScalarField& f, Norm p) {
  const double w = f.grid().h() * f.grid().h();
  return integrate_norm(f.size(), w, p, [&](std::size_t k) { return std::abs(f[k]); });
}

double lp_norm(const VectorField& u, Norm p) {
  const double w = u.grid().h() * u.grid().h();
  return integrate_norm(u.u1.size(), w, p, [&](std::size_t k) { return std::hypot(u.u1[k], u.u2[k]); });
}

}  // namespace wz
