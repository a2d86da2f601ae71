#pragma once

#include <span>
#include <vector>

#include "wz/stochastic/corrector.hpp"
#include "wz/stochastic/noise_basis.hpp"
#include "wz/stochastic/noise_driver.hpp"
#include "wz/torus/field.hpp"

namespace wz {

/// Positions of an m x m family of labels y_ij = (i/m, j/m), row-major in (i, j).
class FlowMap {
 public:
  explicit FlowMap(int m);

  int m() const { return m_; }
  std::size_t size() const { return positions_.size(); }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }
  void advance_time(double dt) { time_ += dt; }

  TorusPoint label(std::size_t k) const;
  std::span<TorusPoint> positions() { return positions_; }
  std::span<const TorusPoint> positions() const { return positions_; }
  TorusPoint& operator[](std::size_t k) { return positions_[k]; }
  const TorusPoint& operator[](std::size_t k) const { return positions_[k]; }

  /// Every position shifted by d (wrapped).
  FlowMap shifted(const Vec2& d) const;

 private:
  int m_;
  double time_ = 0.0;
  std::vector<TorusPoint> positions_;
};

/// Heun step of dx = u(x) dt + sum_k sigma_k(x) eta^k dt over one driver step,
/// with u frozen on the grid and int eta^k taken from the exact increment:
///   x* = x + u(x) dt + S(x),   x' = x + (u(x) + u(x*)) dt / 2 + (S(x) + S(x*)) / 2
/// where S(p) = sum_k sigma_k(p) int eta^k. Throws when dt > eps^2 / 10 and the
/// increment carries noise.
void step_simplified(FlowMap& fm, const VectorField& u, const NoiseBasis& basis, const NoiseIncrement& inc);

/// Per-label record of one limit step, kept for the weak-form residual.
struct LimitStepTrace {
  std::vector<TorusPoint> start;
  std::vector<TorusPoint> predictor;
  std::vector<Vec2> drift_start;      ///< (u + c) at start
  std::vector<Vec2> drift_predictor;  ///< (u + c) at predictor
};

/// Ito step of the limit characteristics with Brownian increments from `inc`:
///   x* = x + v(x) dt,   x' = x + (v(x) + v(x*)) dt / 2 + sum_k sigma_k(x) dbeta^k
/// with v = u + c. The drift uses the same trapezoid as step_simplified, so the
/// two steppers coincide when the noise vanishes.
void step_limit(FlowMap& fm, const VectorField& u, const NoiseBasis& basis, const CorrectorField& corrector,
                const NoiseIncrement& inc, LimitStepTrace* trace = nullptr);

/// Deterministic Heun step by a frozen grid velocity.
void step_deterministic(FlowMap& fm, const VectorField& u, double dt);

struct MeasurePreservation {
  double defect = 0.0;  ///< |sum f(phi(y)) h^2 - sum f(y) h^2|
  double jacobian_min = 0.0;
  double jacobian_max = 0.0;
  double jacobian_mean = 0.0;
};

/// Requires the label grid to match the grid of f. f(phi(y)) is interpolated;
/// the Jacobian determinant comes from centred differences across neighbouring labels.
MeasurePreservation measure_preservation_defect(const FlowMap& fm, const ScalarField& f);

struct LabelSeparation {
  double min_ratio = 0.0;  ///< smallest neighbour distance times m
  double max_ratio = 0.0;  ///< largest neighbour distance times m
};

/// Distances between horizontally and vertically adjacent labels, relative to the
/// initial spacing 1/m. Reported only; a collapse towards 0 flags a loss of injectivity.
LabelSeparation label_separation(const FlowMap& fm);

/// Mean over labels of the geodesic distance between a and b. Throws on label mismatch.
double l1_flow_distance(const FlowMap& a, const FlowMap& b);

/// Grid velocities recorded at equally spaced times t0, t0 + dt, ...
/// Between records the velocity is interpolated linearly in time.
class VelocityHistory {
 public:
  VelocityHistory(double t0, double dt) : t0_(t0), dt_(dt) {}

  void record(VectorField u) { fields_.push_back(std::move(u)); }

  double start() const { return t0_; }
  double end() const { return t0_ + dt_ * (static_cast<double>(fields_.size()) - 1.0); }
  double dt() const { return dt_; }
  std::size_t size() const { return fields_.size(); }
  const VectorField& field(std::size_t k) const { return fields_.at(k); }

  /// u(t, p); throws std::out_of_range outside [start, end].
  Vec2 velocity(double t, const TorusPoint& p) const;

 private:
  double t0_, dt_;
  std::vector<VectorField> fields_;
};

/// Solves dx/dr = u(r, x) from time s to time t (either order) with Heun
/// substeps of at most the record spacing / refine. With s < t this maps points
/// at time s to time t; with s > t it evaluates the inverse map.
std::vector<TorusPoint> transport_points(const VelocityHistory& history, double s, double t,
                                         std::span<const TorusPoint> points, int refine = 1);

/// phi_{s,t} on the labels of an m x m family, or its inverse when `inverse` is set.
/// Throws std::out_of_range when [s, t] is not covered by the records.
FlowMap backward_flow(const VelocityHistory& history, double s, double t, int m, bool inverse = false,
                      int refine = 1);

}  // namespace wz
