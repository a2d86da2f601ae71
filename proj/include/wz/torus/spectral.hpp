#pragma once

#include "wz/torus/field.hpp"

namespace wz {

/// Forward transform; coefficients are normalised by n^-2.
SpectralField to_spectral(const ScalarField& f);
/// Inverse of to_spectral. The field is real by construction.
ScalarField from_spectral(const SpectralField& f);

/// Zeroes every mode with |k1| > n/3 or |k2| > n/3 (2/3 rule).
void dealias(SpectralField& f);

/// Velocity K*xi = -grad^perp (-Laplacian)^-1 xi with grad^perp = (-d2, d1), so that
/// curl u = d1 u2 - d2 u1 = xi. The Nyquist modes and k = 0 are dropped.
/// Throws std::invalid_argument when |mean(xi)| exceeds mean_tol * max(1, max|xi|).
VectorField biot_savart(const ScalarField& xi, bool dealiased = false, double mean_tol = 1e-10);
/// Same operator applied to coefficients (mean mode ignored).
VectorField biot_savart(const SpectralField& xi_hat);

/// d1 u2 - d2 u1
ScalarField curl(const VectorField& u);
/// d1 u1 + d2 u2
ScalarField divergence(const VectorField& u);
VectorField gradient(const ScalarField& f);
VectorField gradient(const SpectralField& f_hat);

/// Sum over all Fourier modes of conj(F) G, i.e. the L2 inner product of the
/// represented fields on the unit torus.
double spectral_inner_product(const SpectralField& f, const SpectralField& g);

}  // namespace wz
