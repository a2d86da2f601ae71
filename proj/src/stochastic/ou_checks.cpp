#include "wz/stochastic/ou_checks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "wz/stochastic/noise_driver.hpp"

namespace wz {
namespace {

// Salts keep diagnostic streams apart from the simulation streams.
constexpr std::uint64_t kLawSalt = 0x4f55'4c41'5700ULL;
constexpr std::uint64_t kSupSalt = 0x4f55'5355'5000ULL;
constexpr std::uint64_t kIntSalt = 0x4f55'494e'5400ULL;
constexpr std::uint64_t kIterSalt = 0x4954'4552'0000ULL;

long steps_for(double t, double dt) {
  const double r = t / dt;
  const long s = std::lround(r);
  if (std::abs(r - static_cast<double>(s)) > 1e-9 * std::max(1.0, r))
    throw std::invalid_argument("time is not a multiple of dt");
  return s;
}

}  // namespace

Estimate estimate(std::span<const double> samples) {
  Estimate e;
  e.count = static_cast<long>(samples.size());
  if (samples.empty()) return e;
  e.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(e.count);
  if (e.count > 1) {
    double ss = 0.0;
    for (double v : samples) ss += (v - e.mean) * (v - e.mean);
    e.std_error = std::sqrt(ss / static_cast<double>(e.count - 1) / static_cast<double>(e.count));
  }
  return e;
}

OuLawReport ou_law_check(double epsilon, double dt, int samples, std::uint64_t seed,
                         std::span<const double> lags, double burn_in) {
  OuLawReport out;
  out.epsilon = epsilon;
  out.expected_variance = 0.5 / (epsilon * epsilon);
  const long burn = steps_for(burn_in, dt);
  std::vector<long> lag_steps;
  for (double l : lags) lag_steps.push_back(steps_for(l, dt));
  const long last = lag_steps.empty() ? 0 : *std::max_element(lag_steps.begin(), lag_steps.end());

  std::vector<double> squares(samples);
  std::vector<std::vector<double>> products(lags.size(), std::vector<double>(samples));
  for (int r = 0; r < samples; ++r) {
    NoiseDriver d(1, epsilon, dt, seed ^ kLawSalt, static_cast<std::uint64_t>(r));
    for (long s = 0; s < burn; ++s) d.step();
    const double x0 = d.eta()[0];
    squares[r] = x0 * x0;
    for (long s = 1; s <= last; ++s) {
      d.step();
      for (std::size_t l = 0; l < lag_steps.size(); ++l)
        if (lag_steps[l] == s) products[l][r] = x0 * d.eta()[0];
    }
    for (std::size_t l = 0; l < lag_steps.size(); ++l)
      if (lag_steps[l] == 0) products[l][r] = x0 * x0;
  }
  out.variance = estimate(squares);
  for (std::size_t l = 0; l < lags.size(); ++l) {
    OuLawReport::Lag lag;
    lag.lag = lags[l];
    lag.autocovariance = estimate(products[l]);
    lag.expected = out.expected_variance * std::exp(-lags[l] / (epsilon * epsilon));
    out.lags.push_back(lag);
  }
  return out;
}

OuSupReport ou_sup_check(double epsilon, double horizon, double dt, int replicas, std::uint64_t seed,
                         double power) {
  OuSupReport out;
  out.epsilon = epsilon;
  out.power = power;
  const long steps = std::lround(horizon / dt);
  std::vector<double> sups(replicas);
  for (int r = 0; r < replicas; ++r) {
    NoiseDriver d(1, epsilon, dt, seed ^ kSupSalt, static_cast<std::uint64_t>(r));
    double m = std::abs(d.eta()[0]);
    for (long s = 0; s < steps; ++s) {
      d.step();
      m = std::max(m, std::abs(d.eta()[0]));
    }
    sups[r] = std::pow(m, power);
  }
  out.sup_moment = estimate(sups);
  const double inv_eps2 = 1.0 / (epsilon * epsilon);
  out.scale = std::pow(epsilon, -power) * std::pow(std::log1p(inv_eps2), 0.5 * power);
  out.ratio = out.sup_moment.mean / out.scale;
  return out;
}

IntegratedOuReport integrated_ou_check(double epsilon, double horizon, double dt, int replicas,
                                       std::uint64_t seed) {
  IntegratedOuReport out;
  out.epsilon = epsilon;
  const long steps = steps_for(horizon, dt);
  std::vector<double> sup_sq(replicas), terminal(replicas);
  for (int r = 0; r < replicas; ++r) {
    NoiseDriver d(1, epsilon, dt, seed ^ kIntSalt, static_cast<std::uint64_t>(r));
    double integral = 0.0;
    double worst = 0.0;
    for (long s = 0; s < steps; ++s) {
      d.step();
      const NoiseIncrement inc = d.increment();
      integral += inc.integrated_eta[0];
      // Trapezoid quadrature of the stored path agrees to O(dt^2) per step.
      const double trapezoid = 0.5 * dt * (inc.eta_start[0] + inc.eta_end[0]);
      out.max_quadrature_gap = std::max(out.max_quadrature_gap, std::abs(trapezoid - inc.integrated_eta[0]));
      worst = std::max(worst, std::abs(integral - d.beta()[0]));
    }
    sup_sq[r] = worst * worst;
    const double gap = integral - d.beta()[0];
    terminal[r] = gap * gap;
  }
  out.rms_sup = std::sqrt(estimate(sup_sq).mean);
  out.terminal_square = estimate(terminal);
  return out;
}

double iterated_integral_conditional_mean(double epsilon, double mesh, double eta_h0, double eta_k0,
                                          bool same_channel) {
  const double eps2 = epsilon * epsilon;
  const double a = std::exp(-mesh / eps2);
  const double first = 0.5 * eps2 * eps2 * eta_h0 * eta_k0 * (a - 1.0) * (a - 1.0);
  if (!same_channel) return first;
  return first + 0.5 * (mesh + eps2 * (-1.5 + 2.0 * a - 0.5 * a * a));
}

double iterated_integral_stationary_mean(double epsilon, double mesh, bool same_channel) {
  if (!same_channel) return 0.0;
  const double var = 0.5 / (epsilon * epsilon);
  const double eps2 = epsilon * epsilon;
  const double a = std::exp(-mesh / eps2);
  return 0.5 * eps2 * eps2 * var * (a - 1.0) * (a - 1.0) + 0.5 * (mesh + eps2 * (-1.5 + 2.0 * a - 0.5 * a * a));
}

IteratedIntegralStat iterated_integral_check(double epsilon, double mesh, bool same_channel, int replicas,
                                             std::uint64_t seed, std::optional<std::pair<double, double>> fixed_eta0,
                                             double substep_factor) {
  if (!(mesh > 0.0)) throw std::invalid_argument("iterated_integral_check: mesh must be > 0");
  IteratedIntegralStat out;
  out.h = 0;
  out.k = same_channel ? 0 : 1;
  out.epsilon = epsilon;
  out.mesh = mesh;
  out.fixed_eta0 = fixed_eta0;
  const double eps2 = epsilon * epsilon;
  out.substeps = static_cast<int>(std::ceil(mesh / (eps2 / substep_factor)));
  const double dt = mesh / out.substeps;
  const std::size_t channels = same_channel ? 1 : 2;

  std::vector<double> values(replicas), residuals(replicas);
  double predicted = 0.0;
  for (int r = 0; r < replicas; ++r) {
    std::vector<double> eta0;
    if (fixed_eta0) {
      eta0 = {fixed_eta0->first, fixed_eta0->second};
      eta0.resize(channels);
    }
    NoiseDriver d = fixed_eta0 ? NoiseDriver(channels, epsilon, dt, seed ^ kIterSalt, r, eta0)
                               : NoiseDriver(channels, epsilon, dt, seed ^ kIterSalt, r, OuStart::Stationary);
    const double eh0 = d.eta()[0];
    const double ek0 = d.eta()[channels - 1];
    // c = int B^h dB^k with B = int eta; the trapezoid rule is exact when h == k.
    double bh = 0.0;
    double c = 0.0;
    for (int s = 0; s < out.substeps; ++s) {
      d.step();
      const NoiseIncrement inc = d.increment();
      const double jh = inc.integrated_eta[0];
      const double jk = inc.integrated_eta[channels - 1];
      c += (bh + 0.5 * jh) * jk;
      bh += jh;
    }
    const double expected = iterated_integral_conditional_mean(epsilon, mesh, eh0, ek0, same_channel);
    values[r] = c;
    residuals[r] = c - expected;
    predicted += expected;
  }
  out.empirical = estimate(values);
  out.residual = estimate(residuals);
  out.predicted = predicted / replicas;
  return out;
}

}  // namespace wz
