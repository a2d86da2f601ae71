#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wz/harness/config.hpp"
#include "wz/stochastic/corrector.hpp"
#include "wz/stochastic/noise_basis.hpp"
#include "wz/systems/weak_form.hpp"

namespace wz {

/// Distances of one approximating system from the limit system along a replica.
struct SystemGap {
  double flow_sup = 0.0;      ///< sup_t mean_labels |phi^eps - phi|
  double velocity_sup = 0.0;  ///< sup_t ||u^eps - u||_L1 on the deposited fields
  /// <xi^eps - xi, f> by particle quadrature, [checkpoint][test function]
  std::vector<std::vector<double>> weak_gaps;

  double weak_max() const;
};

struct ConvergenceRecord {
  double epsilon = 0.0;
  int replica = 0;
  bool failed = false;
  std::string error;
  std::optional<SystemGap> simplified;
  std::optional<SystemGap> full;
  double zeta_ratio = 0.0;  ///< sup_t ||zeta||_L1 / (eps^2 sup_t ||grad Theta||_inf), two-scale system only
  double wall_seconds = 0.0;
};

/// Everything a replica needs that does not depend on eps or the replica id.
struct ExperimentSetup {
  ExperimentConfig config;
  NoiseBasis basis;
  CorrectorField corrector;
  ScalarField initial;
  std::vector<TestFunction> functions;
  std::vector<long> checkpoint_steps;
};

/// Validates the config and builds the basis, corrector, initial vorticity and test functions.
ExperimentSetup prepare_experiment(const ExperimentConfig& cfg);

/// Replica key fed to the driver streams. Under matched seeds it is the replica id
/// for every eps; otherwise every (eps index, replica) pair gets its own key.
std::uint64_t replica_stream_key(const ExperimentConfig& cfg, std::size_t eps_index, int replica);

/// Callback invoked at every checkpoint with the states of the limit system and
/// of the systems under test (null when not run).
struct CheckpointObserver {
  virtual ~CheckpointObserver() = default;
  virtual void checkpoint(long step, double time, const SystemState& limit, const SystemState* simplified,
                          const SystemState* full) = 0;
};

/// One shared driver; the limit system is stepped in lockstep with (sE) and/or (E).
/// Errors are caught and returned as a failed record.
ConvergenceRecord run_replica(const ExperimentSetup& setup, std::size_t eps_index, int replica,
                              CheckpointObserver* observer = nullptr);
ConvergenceRecord run_replica(const ExperimentConfig& cfg, double epsilon, int replica);

struct MetricSummary {
  double epsilon = 0.0;
  std::string metric;
  double mean = 0.0;
  double std_error = 0.0;
  int n_replicas = 0;
};

/// Names of the aggregated metrics written for the selected systems.
std::vector<std::string> metric_names(SystemSelector s);

/// Value of a named metric in one record; nullopt when the record lacks it.
std::optional<double> metric_value(const ConvergenceRecord& r, const std::string& metric);

struct TrendReport {
  std::string metric;
  int inversions = 0;          ///< steps where the mean grows as eps decreases
  int large_inversions = 0;    ///< inversions larger than one stderr
  double slope = 0.0;          ///< least-squares slope of log mean against log eps
  bool monotone = false;       ///< at most one inversion and none larger than one stderr
};

/// eps and the summaries must share one order; the trend is read along decreasing eps.
TrendReport trend_report(const std::string& metric, std::vector<MetricSummary> rows);

struct SweepResult {
  std::vector<ConvergenceRecord> records;  ///< (eps, replica) order
  std::vector<MetricSummary> summary;      ///< (eps, metric) order
  std::vector<TrendReport> trends;
  int failures = 0;
};

/// Runs every (eps, replica) pair on the worker pool and folds in (eps, replica) order.
SweepResult run_sweep(const ExperimentConfig& cfg);

/// Writes sweep.csv, trend.txt and, when cfg.per_replica_rows is set, sweep_replicas.csv
/// into cfg.out. Wall-clock times go to timing.csv so the other files depend on the seed only.
void write_sweep(const ExperimentConfig& cfg, const SweepResult& result);

std::string sweep_csv_header();

}  // namespace wz
