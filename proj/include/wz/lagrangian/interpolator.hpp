#pragma once

#include <array>

#include "wz/torus/field.hpp"

namespace wz {

/// Periodic tensor-product cubic Lagrange interpolation on the four nodes
/// around a point. Exact at nodes and on cubic polynomials in each direction.
struct CubicStencil {
  std::array<int, 4> i{};
  std::array<int, 4> j{};
  std::array<double, 4> wx{};
  std::array<double, 4> wy{};

  CubicStencil(const Grid& grid, const TorusPoint& p);

  double apply(const double* values, int n) const {
    double s = 0.0;
    for (int a = 0; a < 4; ++a) {
      const double* row = values + static_cast<std::size_t>(i[a]) * n;
      s += wx[a] * (wy[0] * row[j[0]] + wy[1] * row[j[1]] + wy[2] * row[j[2]] + wy[3] * row[j[3]]);
    }
    return s;
  }
};

/// Weights of the four-point Lagrange interpolant at offset t in [0, 1) from node 0,
/// for nodes at -1, 0, 1, 2.
std::array<double, 4> cubic_weights(double t);

class Interpolator {
 public:
  explicit Interpolator(const ScalarField& f) : field_(&f) {}

  double operator()(const TorusPoint& p) const;

 private:
  const ScalarField* field_;
};

class VectorInterpolator {
 public:
  explicit VectorInterpolator(const VectorField& u) : field_(&u) {}

  Vec2 operator()(const TorusPoint& p) const;

 private:
  const VectorField* field_;
};

}  // namespace wz
