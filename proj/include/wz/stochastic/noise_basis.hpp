#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "wz/torus/field.hpp"

namespace wz {

enum class Phase { Cos, Sin };

/// One real noise channel theta = A cos(2 pi k.x) or A sin(2 pi k.x) with
/// A = sqrt(2) q_k, and its velocity sigma = K * theta in closed form:
///   cos:  sigma =  A k^perp / (2 pi |k|^2) sin(2 pi k.x)
///   sin:  sigma = -A k^perp / (2 pi |k|^2) cos(2 pi k.x)
struct NoiseMode {
  int k1 = 0;
  int k2 = 0;
  Phase phase = Phase::Cos;
  double weight = 0.0;     ///< q_k
  double amplitude = 0.0;  ///< sqrt(2) q_k
};

/// Jacobian of a planar vector field, entry (a, b) = d_b v^a.
struct Mat2 {
  std::array<double, 4> m{};
  double operator()(int a, int b) const { return m[2 * a + b]; }
  double& operator()(int a, int b) { return m[2 * a + b]; }
  Vec2 apply(const Vec2& v) const { return {m[0] * v.x + m[1] * v.y, m[2] * v.x + m[3] * v.y}; }
};

/// Truncated family of transport-noise coefficients over the half lattice
/// 0 < |k|_inf <= K_max, two phases per wavevector. Channel 2j is the cosine and
/// channel 2j+1 the sine of wavevector j.
class NoiseBasis {
 public:
  /// q_k = amplitude |k|^-(3 + decay). Grid fields theta_k and sigma_k = K * theta_k
  /// are tabulated on `grid`; pointwise queries use the closed forms.
  static NoiseBasis build(int k_max, double decay, double amplitude, Grid grid);

  /// A basis with no channels.
  static NoiseBasis empty(Grid grid);

  std::size_t channel_count() const { return modes_.size(); }
  const std::vector<NoiseMode>& modes() const { return modes_; }
  const Grid& grid() const { return grid_; }
  int k_max() const { return k_max_; }
  double decay() const { return decay_; }
  double amplitude() const { return amplitude_; }

  const ScalarField& theta(std::size_t k) const { return theta_[k]; }
  const VectorField& sigma(std::size_t k) const { return sigma_[k]; }

  double theta_at(std::size_t k, const TorusPoint& p) const;
  Vec2 theta_gradient_at(std::size_t k, const TorusPoint& p) const;
  Vec2 sigma_at(std::size_t k, const TorusPoint& p) const;
  Mat2 sigma_jacobian_at(std::size_t k, const TorusPoint& p) const;

  /// sigma_k(p) for every channel.
  void sigma_all_at(const TorusPoint& p, std::span<Vec2> out) const;
  /// sum_k weights[k] sigma_k(p).
  Vec2 combination_at(const TorusPoint& p, std::span<const double> weights) const;

  /// Coefficients of sum_k weights[k] theta_k.
  SpectralField theta_spectral(std::span<const double> weights) const;

  /// sum_k ||grad theta_k||_inf, the finite form of the summability assumption.
  double gradient_sum() const;
  /// sum_k ||grad^2 sigma_k||_inf with the R^8 Euclidean norm of the second derivatives.
  double sigma_hessian_sum() const;
  /// max_k ||sigma_k||_inf
  double sigma_sup() const;

 private:
  NoiseBasis(Grid grid) : grid_(grid) {}

  struct Phasor {
    double re, im;
  };
  // Per wavevector (channel pair): k and A / (2 pi |k|^2).
  struct Wave {
    int k1, k2;
    double coef;
  };

  // exp(2 pi i j x) for j in [0, K_max] and exp(2 pi i j y) for j in [-K_max, K_max].
  void fill_phasors(const TorusPoint& p, std::vector<Phasor>& ex, std::vector<Phasor>& ey) const;

  Grid grid_;
  int k_max_ = 0;
  double decay_ = 0.0;
  double amplitude_ = 0.0;
  std::vector<NoiseMode> modes_;
  std::vector<Wave> waves_;
  std::vector<ScalarField> theta_;
  std::vector<VectorField> sigma_;
};

/// Enumerates the half lattice used by build(): k1 > 0, or k1 == 0 and k2 > 0.
std::vector<std::array<int, 2>> half_lattice(int k_max);

}  // namespace wz
