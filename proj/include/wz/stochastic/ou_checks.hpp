#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace wz {

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  long count = 0;
};

/// Mean and standard error of a sample.
Estimate estimate(std::span<const double> samples);

struct OuLawReport {
  double epsilon = 0.0;
  Estimate variance;  ///< sample second moment of eta at the observation time
  double expected_variance = 0.0;
  struct Lag {
    double lag = 0.0;
    Estimate autocovariance;
    double expected = 0.0;  ///< eps^-2/2 e^{-lag/eps^2}
  };
  std::vector<Lag> lags;
};

/// Independent single-channel drivers started from the stationary law, run for
/// `burn_in` then observed at the lags (all times multiples of dt).
OuLawReport ou_law_check(double epsilon, double dt, int samples, std::uint64_t seed,
                         std::span<const double> lags, double burn_in);

struct OuSupReport {
  double epsilon = 0.0;
  double power = 1.0;
  Estimate sup_moment;  ///< E[sup_{[0,T]} |eta|^p]
  double scale = 0.0;   ///< eps^-p log^{p/2}(1 + eps^-2)
  double ratio = 0.0;   ///< sup_moment.mean / scale
};

/// Monte Carlo estimate of E[sup_{t <= T} |eta_t|^p] on the step grid of size dt.
OuSupReport ou_sup_check(double epsilon, double horizon, double dt, int replicas, std::uint64_t seed,
                         double power = 1.0);

struct IntegratedOuReport {
  double epsilon = 0.0;
  double rms_sup = 0.0;         ///< sqrt E[sup_t |int_0^t eta - beta_t|^2]
  Estimate terminal_square;     ///< E|int_0^T eta - beta_T|^2
  double max_quadrature_gap = 0.0;  ///< exact identity vs trapezoid on the stored path, worst step
};

IntegratedOuReport integrated_ou_check(double epsilon, double horizon, double dt, int replicas,
                                       std::uint64_t seed);

/// E[c_{h,k} | eta_0] for c = int_0^mesh (int_0^s eta^h dr) eta^k ds:
///   eps^4/2 eta^h_0 eta^k_0 (e^{-mesh/eps^2} - 1)^2
///   + [h == k]/2 (mesh + eps^2 (-3/2 + 2 e^{-mesh/eps^2} - 1/2 e^{-2 mesh/eps^2})).
double iterated_integral_conditional_mean(double epsilon, double mesh, double eta_h0, double eta_k0,
                                          bool same_channel);

/// Stationary average of the conditional mean (eta_0 integrated out).
double iterated_integral_stationary_mean(double epsilon, double mesh, bool same_channel);

struct IteratedIntegralStat {
  int h = 0;
  int k = 0;
  double epsilon = 0.0;
  double mesh = 0.0;
  int substeps = 0;
  std::optional<std::pair<double, double>> fixed_eta0;  ///< set when eta_0 was prescribed
  Estimate empirical;        ///< sample mean of c
  Estimate residual;         ///< sample mean of c - E[c | eta_0]
  double predicted = 0.0;    ///< mean of E[c | eta_0] over the replicas
  double z_score() const { return residual.std_error > 0 ? residual.mean / residual.std_error : 0.0; }
};

/// Simulates c^0_{h,k}(mesh, eps) with exact OU increments on a sub-grid of
/// step <= eps^2 / substep_factor and compares with the conditional mean.
/// With fixed_eta0 unset, eta_0 is drawn from the stationary law per replica.
IteratedIntegralStat iterated_integral_check(double epsilon, double mesh, bool same_channel, int replicas,
                                             std::uint64_t seed,
                                             std::optional<std::pair<double, double>> fixed_eta0 = {},
                                             double substep_factor = 50.0);

}  // namespace wz
