#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace wz {

/// Which two-scale approximation is compared with the limit system.
enum class SystemSelector { Simplified, Full, Both };

SystemSelector parse_system_selector(const std::string& text);
std::string to_string(SystemSelector s);

/// Every field can be set from a `key=value` line whose key is the field name.
struct ExperimentConfig {
  int n = 64;                 ///< grid size
  int m = 64;                 ///< labels per direction
  std::vector<double> eps = {0.4, 0.3, 0.2, 0.15, 0.1};
  double rho = 1.75;          ///< mesh rule delta_eps = eps^rho, rho in (1.5, 2)
  double dt = 0.0;            ///< time step; 0 selects min(dt_max, min(eps)^2 / 10)
  double dt_max = 1e-3;
  double horizon = 0.5;       ///< T
  int k_max = 3;
  double decay = 1.0;         ///< delta in q_k = amplitude |k|^-(3 + delta)
  double amplitude = 0.8886;  ///< gives sup |sigma_k| close to 0.2
  int replicas = 8;
  std::uint64_t seed = 20240601;
  SystemSelector system = SystemSelector::Both;
  std::vector<std::string> test_functions = {"sin(1,0)", "cos(0,1)", "sin(1,1)"};
  std::string initial_condition = "shear";
  std::uint64_t ic_seed = 1;
  bool matched_seeds = true;
  int checkpoints = 8;
  bool advect_small_scales = true;
  bool per_replica_rows = false;
  int workers = 0;               ///< 0 selects the hardware concurrency
  double tolerance_scale = 1.0;  ///< multiplies every diagnostic bound
  double diagnostic_scale = 1.0; ///< multiplies Monte Carlo sample counts of the diagnostics
  std::filesystem::path out = "results";

  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;

  /// Common step for all eps.
  double time_step() const;
  long steps() const;
  double mesh(double epsilon) const;
};

/// Applies one `key=value` assignment; throws on unknown keys or bad values.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Reads `key=value` lines; blank lines and lines starting with '#' are skipped.
ExperimentConfig load_config(const std::filesystem::path& file, ExperimentConfig base = {});

/// Parses "0.4,0.2" style lists.
std::vector<double> parse_double_list(const std::string& text);

/// Renders the configuration in the same key=value format.
std::string dump_config(const ExperimentConfig& cfg);

}  // namespace wz
