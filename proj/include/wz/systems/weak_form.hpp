#pragma once

#include <string>
#include <vector>

#include "wz/stochastic/corrector.hpp"
#include "wz/stochastic/noise_basis.hpp"
#include "wz/systems/state.hpp"

namespace wz {

/// f(x) = cos(2 pi k.x + phase) with closed-form derivatives.
struct TestFunction {
  int k1 = 0;
  int k2 = 0;
  double phase = 0.0;
  std::string name;

  static TestFunction sine(int k1, int k2, std::string name);
  static TestFunction cosine(int k1, int k2, std::string name);

  double value(const TorusPoint& p) const;
  /// value and gradient with one sincos
  void evaluate(const TorusPoint& p, double& value, Vec2& grad) const;
  Vec2 gradient(const TorusPoint& p) const;
  Mat2 hessian(const TorusPoint& p) const;
  ScalarField sample(Grid grid) const;
};

/// sin(2 pi x1), cos(2 pi x2), sin(2 pi (x1 + x2)).
std::vector<TestFunction> default_test_functions();

/// Parses names such as "sin(1,0)" or "cos(0,1)".
TestFunction parse_test_function(const std::string& text);

/// Riemann sum of xi f h^2. Throws on grid mismatch.
double weak_pairing(const ScalarField& xi, const ScalarField& f);

/// sum_labels xi0 f(phi) / m^2, the pairing <xi_t, f> by particle quadrature.
double particle_pairing(const SystemState& state, const TestFunction& f);

/// Terms of the distributional identity for the limit system, accumulated step
/// by step from the stepper's own trace:
///   <xi_t,f> - <xi_0,f> = int <xi, u.grad f> + sum_k int <xi sigma_k.grad f> dbeta^k
///                        + int <xi, c.grad f> + 1/2 sum_k int <xi, tr[sigma_k sigma_k^* grad^2 f]>
/// with c = 1/2 sum_k (sigma_k.grad) sigma_k. The term
/// 1/2 sum_k int <xi div[(sigma_k.grad) sigma_k], f> is accumulated and reported
/// but does not enter the residual.
struct WeakFormTerms {
  double lhs = 0.0;
  double nonlinear = 0.0;
  double ito = 0.0;
  double corrector = 0.0;
  double divergence = 0.0;
  double trace = 0.0;

  double residual() const { return lhs - nonlinear - ito - corrector - trace; }
};

class WeakFormResidual {
 public:
  WeakFormResidual(const SystemState& initial, const NoiseBasis& basis, const CorrectorField& corrector,
                   std::vector<TestFunction> functions);

  /// Adds one step; `trace` and `inc` come from step_limit_system, `after` is the state it produced.
  void observe(const LimitStepTrace& trace, const NoiseIncrement& inc, const SystemState& after);

  const std::vector<WeakFormTerms>& terms() const { return terms_; }
  /// max over observed steps and test functions of |residual|
  double max_residual() const { return max_residual_; }
  long steps() const { return steps_; }

 private:
  const NoiseBasis* basis_;
  bool corrector_active_;
  ScalarField divergence_;  ///< 1/2 sum_k div[(sigma_k.grad) sigma_k] at the grid nodes
  std::vector<TestFunction> functions_;
  std::vector<double> weights_;  ///< xi0 / m^2 per label
  std::vector<double> initial_;
  std::vector<WeakFormTerms> terms_;
  double max_residual_ = 0.0;
  long steps_ = 0;
};

}  // namespace wz
