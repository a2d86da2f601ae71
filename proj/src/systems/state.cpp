#include "wz/systems/state.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "wz/lagrangian/interpolator.hpp"
#include "wz/stochastic/noise_fields.hpp"
#include "wz/torus/norms.hpp"
#include "wz/torus/spectral.hpp"

namespace wz {

std::string to_string(SystemKind kind) {
  switch (kind) {
    case SystemKind::Simplified: return "se";
    case SystemKind::Limit: return "limit";
    case SystemKind::Full: return "e";
  }
  return "unknown";
}

SystemState init_state(SystemKind kind, const ScalarField& xi0, int m) {
  if (std::abs(xi0.mean()) > 1e-12) throw std::invalid_argument("init_state: initial vorticity must have zero mean");
  FlowMap flow(m);
  std::vector<double> values(flow.size());
  if (m == xi0.grid().n()) {
    for (std::size_t k = 0; k < values.size(); ++k) values[k] = xi0[k];
  } else {
    const Interpolator interp(xi0);
    for (std::size_t k = 0; k < values.size(); ++k) values[k] = interp(flow[k]);
  }
  SystemState s{kind, std::move(values), std::move(flow), ScalarField(xi0.grid()), VectorField(xi0.grid()), {}, {}};
  refresh_fields(s);
  return s;
}

void attach_small_scales(SystemState& state, const NoiseBasis& basis, std::span<const double> eta0, double epsilon,
                         SmallScaleStart start, bool advect) {
  if (!(basis.grid() == state.grid())) throw std::invalid_argument("attach_small_scales: basis grid differs");
  SmallScales s{epsilon, ScalarField(state.grid()), ScalarField(state.grid()), advect};
  if (start == SmallScaleStart::Stationary && basis.channel_count() > 0) {
    s.theta = theta_field(basis, eta0);
    s.xi = s.theta;
  }
  state.small = std::move(s);
}

void refresh_fields(SystemState& state) {
  const Grid grid = state.vorticity.grid();
  state.vorticity = deposit(state.flow, state.particle_vorticity, grid, &state.deposition);
  state.vorticity.remove_mean();
  state.velocity = biot_savart(state.vorticity, true);
}

void step_sE(SystemState& state, const NoiseBasis& basis, const NoiseIncrement& inc) {
  step_simplified(state.flow, state.velocity, basis, inc);
  refresh_fields(state);
}

void step_limit_system(SystemState& state, const NoiseBasis& basis, const CorrectorField& corrector,
                       const NoiseIncrement& inc, LimitStepTrace* trace) {
  step_limit(state.flow, state.velocity, basis, corrector, inc, trace);
  refresh_fields(state);
}

ScalarField advect_semi_lagrangian(const ScalarField& f, const VectorField& u, double tau) {
  const Grid& g = f.grid();
  const Interpolator fi(f);
  const VectorInterpolator ui(u);
  ScalarField out(g);
  const double h = g.h();
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) {
      const TorusPoint x{i * h, j * h};
      const TorusPoint mid = x.shifted(-0.5 * tau * u.at(i, j));
      out(i, j) = fi(x.shifted(-tau * ui(mid)));
    }
  return out;
}

void step_E(SystemState& state, const NoiseBasis& basis, const NoiseIncrement& inc) {
  if (!state.small) throw std::logic_error("step_E: state has no small scales");
  SmallScales& s = *state.small;
  const double dt = inc.dt;
  if (basis.channel_count() > 0 && dt > s.epsilon * s.epsilon / 10.0 * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "step_E: dt = " << dt << " exceeds eps^2/10 = " << s.epsilon * s.epsilon / 10.0;
    throw std::invalid_argument(msg.str());
  }

  VectorField transport = state.velocity;
  ScalarField zeta = s.xi - s.theta;
  if (zeta.max_abs() > 0.0) {
    zeta.remove_mean();
    transport += biot_savart(zeta, true);
  }
  step_simplified(state.flow, transport, basis, inc);

  const VectorField& large = state.velocity;
  if (s.advect) s.xi = advect_semi_lagrangian(s.xi, large, 0.5 * dt);
  if (basis.channel_count() > 0) {
    const ScalarField forcing = theta_field(basis, inc.ou_forcing);
    s.xi *= inc.decay;
    s.xi += forcing;
    s.theta *= inc.decay;
    s.theta += forcing;
  } else {
    s.xi *= inc.decay;
    s.theta *= inc.decay;
  }
  if (s.advect) s.xi = advect_semi_lagrangian(s.xi, large, 0.5 * dt);

  refresh_fields(state);
}

ZetaReport zeta_diagnostic(const SystemState& state) {
  if (state.kind != SystemKind::Full || !state.small)
    throw std::logic_error("zeta_diagnostic: only defined for the two-scale system");
  const SmallScales& s = *state.small;
  ZetaReport r{s.xi - s.theta, 0.0, 0.0, 0.0};
  r.l1 = lp_norm(r.zeta, Norm::L1);
  r.theta_gradient_sup = gradient(s.theta).max_norm();
  const double scale = s.epsilon * s.epsilon * r.theta_gradient_sup;
  r.ratio = scale > 0.0 ? r.l1 / scale : 0.0;
  return r;
}

}  // namespace wz
