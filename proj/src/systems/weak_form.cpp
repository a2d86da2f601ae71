#include "wz/systems/weak_form.hpp"

#include <cmath>
#include <numbers>
#include <regex>
#include <stdexcept>

#include "wz/lagrangian/interpolator.hpp"

namespace wz {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

TestFunction TestFunction::sine(int k1, int k2, std::string name) {
  return {k1, k2, -0.5 * std::numbers::pi, std::move(name)};
}

TestFunction TestFunction::cosine(int k1, int k2, std::string name) { return {k1, k2, 0.0, std::move(name)}; }

void TestFunction::evaluate(const TorusPoint& p, double& value, Vec2& grad) const {
  double sn, cs;
  sincos(kTwoPi * (k1 * p.x + k2 * p.y) + phase, &sn, &cs);
  value = cs;
  grad = {-kTwoPi * k1 * sn, -kTwoPi * k2 * sn};
}

double TestFunction::value(const TorusPoint& p) const { return std::cos(kTwoPi * (k1 * p.x + k2 * p.y) + phase); }

Vec2 TestFunction::gradient(const TorusPoint& p) const {
  const double s = -std::sin(kTwoPi * (k1 * p.x + k2 * p.y) + phase) * kTwoPi;
  return {s * k1, s * k2};
}

Mat2 TestFunction::hessian(const TorusPoint& p) const {
  const double c = -std::cos(kTwoPi * (k1 * p.x + k2 * p.y) + phase) * kTwoPi * kTwoPi;
  Mat2 h;
  h(0, 0) = c * k1 * k1;
  h(0, 1) = h(1, 0) = c * k1 * k2;
  h(1, 1) = c * k2 * k2;
  return h;
}

ScalarField TestFunction::sample(Grid grid) const {
  return ScalarField::sample(grid, [this](double x, double y) { return value({x, y}); });
}

std::vector<TestFunction> default_test_functions() {
  return {TestFunction::sine(1, 0, "sin(1,0)"), TestFunction::cosine(0, 1, "cos(0,1)"),
          TestFunction::sine(1, 1, "sin(1,1)")};
}

TestFunction parse_test_function(const std::string& text) {
  static const std::regex form(R"(\s*(sin|cos)\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, form)) throw std::invalid_argument("bad test function: " + text);
  const int k1 = std::stoi(m[2]), k2 = std::stoi(m[3]);
  if (k1 == 0 && k2 == 0) throw std::invalid_argument("test function must not be constant: " + text);
  const std::string name = m[1].str() + "(" + m[2].str() + "," + m[3].str() + ")";
  return m[1] == "sin" ? TestFunction::sine(k1, k2, name) : TestFunction::cosine(k1, k2, name);
}

double weak_pairing(const ScalarField& xi, const ScalarField& f) {
  if (!(xi.grid() == f.grid())) throw std::invalid_argument("weak_pairing: grids differ");
  double s = 0.0;
  for (std::size_t k = 0; k < xi.size(); ++k) s += xi[k] * f[k];
  const double h = xi.grid().h();
  return s * h * h;
}

double particle_pairing(const SystemState& state, const TestFunction& f) {
  double s = 0.0;
  for (std::size_t k = 0; k < state.flow.size(); ++k) s += state.particle_vorticity[k] * f.value(state.flow[k]);
  return s / static_cast<double>(state.flow.size());
}

WeakFormResidual::WeakFormResidual(const SystemState& initial, const NoiseBasis& basis,
                                   const CorrectorField& corrector, std::vector<TestFunction> functions)
    : basis_(&basis),
      corrector_active_(basis.channel_count() > 0 && !corrector.vanishes()),
      divergence_(basis.grid()),
      functions_(std::move(functions)),
      terms_(functions_.size()) {
  const Grid& g = basis.grid();
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) {
      double div = 0.0;
      for (std::size_t k = 0; k < basis.channel_count(); ++k) {
        const Mat2 J = basis.sigma_jacobian_at(k, {i * g.h(), j * g.h()});
        // div[(sigma.grad) sigma] = tr(J^2) for solenoidal sigma
        div += J(0, 0) * J(0, 0) + 2.0 * J(0, 1) * J(1, 0) + J(1, 1) * J(1, 1);
      }
      divergence_(i, j) = 0.5 * div;
    }
  const double w = 1.0 / static_cast<double>(initial.flow.size());
  for (double v : initial.particle_vorticity) weights_.push_back(v * w);
  for (const auto& f : functions_) initial_.push_back(particle_pairing(initial, f));
}

void WeakFormResidual::observe(const LimitStepTrace& trace, const NoiseIncrement& inc, const SystemState& after) {
  if (trace.start.size() != weights_.size()) throw std::invalid_argument("WeakFormResidual: trace size mismatch");
  const std::size_t channels = basis_->channel_count();
  if (channels > 0 && inc.dbeta.size() != channels)
    throw std::invalid_argument("WeakFormResidual: missing stored increments");
  const double dt = inc.dt;
  std::vector<Vec2> sigma(channels);
  const Interpolator div_at(divergence_);
  std::vector<WeakFormTerms> step(functions_.size());
  for (std::size_t q = 0; q < weights_.size(); ++q) {
    const double w = weights_[q];
    const TorusPoint& x = trace.start[q];
    const TorusPoint& xp = trace.predictor[q];
    Vec2 c0{}, c1{}, noise{};
    double div = 0.0, s11 = 0.0, s12 = 0.0, s22 = 0.0;
    if (corrector_active_) {
      c0 = corrector_at(*basis_, x);
      c1 = corrector_at(*basis_, xp);
    }
    if (channels > 0) {
      basis_->sigma_all_at(x, sigma);
      for (std::size_t k = 0; k < channels; ++k) {
        const Vec2& sg = sigma[k];
        noise += inc.dbeta[k] * sg;
        s11 += sg.x * sg.x;
        s12 += sg.x * sg.y;
        s22 += sg.y * sg.y;
      }
      div = div_at(x);
    }
    const Vec2 u0 = trace.drift_start[q] - c0;
    const Vec2 u1 = trace.drift_predictor[q] - c1;
    for (std::size_t f = 0; f < functions_.size(); ++f) {
      const TestFunction& tf = functions_[f];
      double v0, v1;
      Vec2 g0, g1;
      tf.evaluate(x, v0, g0);
      tf.evaluate(xp, v1, g1);
      WeakFormTerms& t = step[f];
      t.nonlinear += w * 0.5 * dt * (dot(u0, g0) + dot(u1, g1));
      t.corrector += w * 0.5 * dt * (dot(c0, g0) + dot(c1, g1));
      if (channels > 0) {
        t.ito += w * dot(noise, g0);
        t.divergence += w * dt * div * v0;
        // tr[S grad^2 f] with grad^2 f = -(2 pi)^2 f k k^T and S = sum_k sigma_k sigma_k^T
        const double kk = s11 * tf.k1 * tf.k1 + 2.0 * s12 * tf.k1 * tf.k2 + s22 * tf.k2 * tf.k2;
        t.trace += w * 0.5 * dt * (-kTwoPi * kTwoPi * v0 * kk);
      }
    }
  }
  ++steps_;
  for (std::size_t f = 0; f < functions_.size(); ++f) {
    WeakFormTerms& t = terms_[f];
    t.nonlinear += step[f].nonlinear;
    t.corrector += step[f].corrector;
    t.ito += step[f].ito;
    t.divergence += step[f].divergence;
    t.trace += step[f].trace;
    t.lhs = particle_pairing(after, functions_[f]) - initial_[f];
    max_residual_ = std::max(max_residual_, std::abs(t.residual()));
  }
}

}  // namespace wz
