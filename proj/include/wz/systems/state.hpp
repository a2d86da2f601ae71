#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wz/lagrangian/flow.hpp"
#include "wz/systems/deposition.hpp"

namespace wz {

enum class SystemKind {
  Simplified,  ///< (sE): particles driven by u + sum sigma_k eta^k
  Limit,       ///< Stratonovich transport-noise Euler, stepped in Ito form
  Full,        ///< two-scale system: large scales on particles, small scales on the grid
};

std::string to_string(SystemKind kind);

/// Small-scale vorticity of the two-scale system together with the OU field
/// Theta = sum_k theta_k eta^k that it relaxes towards when not advected.
struct SmallScales {
  double epsilon = 1.0;
  ScalarField xi;     ///< xi_S
  ScalarField theta;  ///< Theta
  bool advect = true;
};

enum class SmallScaleStart {
  Stationary,  ///< xi_S(0) = Theta(0)
  Zero,        ///< xi_S(0) = 0 and Theta(0) = 0
};

struct SystemState {
  SystemKind kind;
  std::vector<double> particle_vorticity;  ///< xi_0 at the labels
  FlowMap flow;
  ScalarField vorticity;  ///< deposit of the particle vorticity, zero mean
  VectorField velocity;   ///< K * vorticity, 2/3-dealiased
  DepositionStats deposition;
  std::optional<SmallScales> small;

  double time() const { return flow.time(); }
  const Grid& grid() const { return vorticity.grid(); }
};

/// Seeds an m x m label family at xi0's grid (interpolated when m differs from n).
/// Throws std::invalid_argument when |mean xi0| > 1e-12.
SystemState init_state(SystemKind kind, const ScalarField& xi0, int m);

/// Adds the small scales of the two-scale system. With a stationary start
/// Theta(0) = sum_k theta_k eta0^k; `eta0` is ignored for a zero start.
void attach_small_scales(SystemState& state, const NoiseBasis& basis, std::span<const double> eta0, double epsilon,
                         SmallScaleStart start = SmallScaleStart::Stationary, bool advect = true);

/// Re-deposits the particle vorticity and recomputes the velocity.
void refresh_fields(SystemState& state);

/// One step of (sE): Heun characteristics with the current velocity, then refresh.
void step_sE(SystemState& state, const NoiseBasis& basis, const NoiseIncrement& inc);

/// One Ito step of the limit system, then refresh.
void step_limit_system(SystemState& state, const NoiseBasis& basis, const CorrectorField& corrector,
                       const NoiseIncrement& inc, LimitStepTrace* trace = nullptr);

/// One step of the two-scale system. Particles move with u_L + K * zeta plus the
/// exact sum_k sigma_k int eta^k; xi_S takes a Strang step: half semi-Lagrangian
/// advection by u_L, the exact OU update xi_S <- a xi_S + sum_k theta_k I_k, and
/// the second half advection.
void step_E(SystemState& state, const NoiseBasis& basis, const NoiseIncrement& inc);

/// f(x - tau u(x - tau u(x) / 2)) with cubic interpolation: one midpoint
/// semi-Lagrangian step of the transport equation by a frozen velocity.
ScalarField advect_semi_lagrangian(const ScalarField& f, const VectorField& u, double tau);

struct ZetaReport {
  ScalarField zeta;
  double l1 = 0.0;
  double theta_gradient_sup = 0.0;  ///< max |grad Theta| over the grid
  double ratio = 0.0;               ///< l1 / (eps^2 theta_gradient_sup), 0 when Theta vanishes
};

/// zeta = xi_S - Theta of a two-scale state. Throws std::logic_error for other systems.
ZetaReport zeta_diagnostic(const SystemState& state);

}  // namespace wz
