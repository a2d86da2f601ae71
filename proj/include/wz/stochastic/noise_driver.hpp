#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace wz {

/// Seed of the Gaussian stream feeding (replica, channel) under a master seed.
/// Rule: splitmix64 applied to master, then mixed in turn with replica and channel.
/// The salt separates unrelated consumers (initial conditions, diagnostics).
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t replica, std::uint64_t channel,
                          std::uint64_t salt = 0);

enum class OuStart {
  Stationary,  ///< eta_0 ~ N(0, eps^-2 / 2), independent across channels
  Zero,        ///< eta_0 = 0
};

/// Joint Gaussian transition of (Delta beta, eta) over one step of length dt.
/// Given eta_t:
///   Delta beta = sqrt(dt) Z1
///   I          = int_t^{t+dt} eps^-2 e^{-eps^-2 (t+dt-s)} d beta_s
///              = (1 - a)/dt Delta beta + s_cond Z2,   a = e^{-dt/eps^2}
///   eta_{t+dt} = a eta_t + I
/// so that Var I = eps^-2 (1 - a^2)/2 and Cov(Delta beta, I) = 1 - a exactly.
struct OuTransition {
  double epsilon = 1.0;
  double dt = 0.0;
  double decay = 1.0;        ///< a
  double regression = 0.0;   ///< (1 - a) / dt
  double conditional_sd = 0.0;

  OuTransition(double epsilon, double dt);

  double stationary_variance() const { return 0.5 / (epsilon * epsilon); }
};

/// Increments of every channel over the last step [t0, t0 + dt].
struct NoiseIncrement {
  double t0 = 0.0;
  double dt = 0.0;
  double epsilon = 1.0;
  double decay = 1.0;                      ///< e^{-dt/eps^2}
  std::span<const double> eta_start;
  std::span<const double> eta_end;
  std::span<const double> dbeta;           ///< Brownian increments
  std::span<const double> ou_forcing;      ///< I, so eta_end = decay eta_start + I
  std::span<const double> integrated_eta;  ///< int eta ds = dbeta - eps^2 (eta_end - eta_start)
};

/// Independent Brownian motions beta^k and their OU smoothings eta^{eps,k},
/// advanced together by exact sampling. Each channel draws from its own stream,
/// so the Brownian path depends only on (master seed, replica, channel, dt) and
/// not on eps: drivers with different eps and equal seeds share beta.
class NoiseDriver {
 public:
  NoiseDriver(std::size_t channels, double epsilon, double dt, std::uint64_t master_seed,
              std::uint64_t replica, OuStart start = OuStart::Stationary);
  /// Starts from the given eta_0 (one value per channel).
  NoiseDriver(std::size_t channels, double epsilon, double dt, std::uint64_t master_seed,
              std::uint64_t replica, std::span<const double> eta0);

  void step();

  /// Increments of the most recent step (all zero before the first step).
  NoiseIncrement increment() const;

  std::size_t channel_count() const { return eta_.size(); }
  double epsilon() const { return transition_.epsilon; }
  double dt() const { return transition_.dt; }
  double time() const { return static_cast<double>(steps_) * transition_.dt; }
  long steps() const { return steps_; }
  std::span<const double> eta() const { return eta_; }
  std::span<const double> beta() const { return beta_; }
  const OuTransition& transition() const { return transition_; }

 private:
  void seed_streams(std::uint64_t master_seed, std::uint64_t replica, std::size_t channels);

  OuTransition transition_;
  long steps_ = 0;
  std::vector<std::mt19937_64> streams_;
  std::vector<std::normal_distribution<double>> normals_;
  std::vector<double> eta_, beta_;
  std::vector<double> eta_prev_, dbeta_, forcing_, integrated_;
};

/// Per-step record of beta and eta for every channel, indexed by step number.
class DriverHistory {
 public:
  explicit DriverHistory(const NoiseDriver& d);

  void record(const NoiseDriver& d);

  double dt() const { return dt_; }
  double epsilon() const { return epsilon_; }
  long last_step() const { return static_cast<long>(beta_.size()) - 1; }
  double beta(long step, std::size_t channel) const { return beta_.at(step).at(channel); }
  double eta(long step, std::size_t channel) const { return eta_.at(step).at(channel); }
  std::span<const double> eta_at(long step) const { return eta_.at(step); }

  /// Step index of time t; throws std::invalid_argument when t is not on the step grid.
  long step_of(double t) const;

 private:
  double dt_;
  double epsilon_;
  std::vector<std::vector<double>> beta_, eta_;
};

/// int_s^t eta^{eps,k} dr from the identity
///   beta^{eps}_t - beta^{eps}_s = beta_t - beta_s - eps^2 (eta_t - eta_s),
/// which is exact; s and t must be recorded step times.
double integrated_ou(const DriverHistory& h, std::size_t channel, double s, double t);

}  // namespace wz
