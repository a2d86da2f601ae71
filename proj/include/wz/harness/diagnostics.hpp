#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "wz/harness/config.hpp"
#include "wz/systems/initial_conditions.hpp"

namespace wz {

struct DiagnosticResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double bound = 0.0;
  std::string note;  ///< "trivial-zero" when the checked quantity vanishes identically
};

/// `name PASS|FAIL measured=<v> bound=<v>` with ` note=<note>` appended when set.
std::string format_diagnostic(const DiagnosticResult& r);

/// Every check with sample counts scaled by cfg.diagnostic_scale and bounds by
/// cfg.tolerance_scale. Failures are entries of the report, never exceptions.
std::vector<DiagnosticResult> run_diagnostics(const ExperimentConfig& cfg);

void write_diagnostics(const std::filesystem::path& file, const std::vector<DiagnosticResult>& results);

struct BiotSavartCheck {
  double curl_error = 0.0;        ///< max over fields of max |curl(K * xi) - xi|
  double divergence_error = 0.0;  ///< max over fields of max |div(K * xi)|
};

/// Random band-limited zero-mean fields on `grid`.
BiotSavartCheck biot_savart_check(Grid grid, int fields, std::uint64_t seed);

struct MeasureRun {
  double defect = 0.0;           ///< max over checkpoints and probe functions
  double range_inflation = 0.0;  ///< max excursion of the deposit outside [min xi0, max xi0], over the range
  double jacobian_spread = 0.0;  ///< max over checkpoints of jacobian_max - jacobian_min
};

/// Noise-free Euler run with m = n particles, probed every `probe_every` steps.
MeasureRun measure_preservation_run(InitialCondition ic, int n, double dt, double horizon, int probe_every = 50,
                                    std::uint64_t ic_seed = 1);

struct ReductionGaps {
  double simplified_limit = 0.0;  ///< sup_t l1 flow distance
  double full_limit = 0.0;
  double simplified_full = 0.0;
};

/// Runs the three systems with amplitude 0 (two-scale system started from xi_S = 0)
/// on the configuration's grid, initial condition and step.
ReductionGaps deterministic_reduction(const ExperimentConfig& cfg);

struct ZetaSpread {
  std::vector<double> epsilons;
  std::vector<double> mean_ratio;
  double spread = 0.0;  ///< max / min of the mean ratios, 0 when any mean vanishes
};

/// Two-scale runs only, `replicas` per eps; the ratio is
/// sup_t ||zeta||_L1 / (eps^2 sup_t ||grad Theta||_inf) per replica.
ZetaSpread zeta_ratio_spread(ExperimentConfig cfg, const std::vector<double>& epsilons, int replicas);

struct IteratedMeshCheck {
  double mesh = 0.0;
  double closed_form_gap = 0.0;  ///< |E c_kk - mesh/2| / (mesh/2) from the closed form
  double empirical_gap = 0.0;    ///< same with the Monte Carlo mean
  double std_error = 0.0;        ///< of the empirical relative gap
};

/// Same-channel iterated integral at mesh = ratio * eps^2.
IteratedMeshCheck iterated_integral_large_mesh(double epsilon, double ratio, int replicas, std::uint64_t seed);

struct WeakResidualRun {
  double dt = 0.0;
  double rms = 0.0;  ///< root mean square over replicas of the max residual along the run
  std::vector<double> max_residual;
};

/// Limit-system runs at step dt with the weak-form residual tracked for the
/// configured test functions; replicas run on the worker pool.
WeakResidualRun weak_residual_rms(const ExperimentConfig& cfg, double dt, int replicas);

}  // namespace wz
