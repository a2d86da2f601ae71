#pragma once

#include "wz/torus/field.hpp"

namespace wz {

enum class Norm { L1, L2, LInf };

/// Riemann-sum Lp norms with weight h^2; for vector fields the pointwise
/// Euclidean magnitude is integrated.
double lp_norm(const ScalarField& f, Norm p);
double lp_norm(const VectorField& u, Norm p);

}  // namespace wz
