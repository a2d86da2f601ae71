#include "wz/stochastic/noise_driver.hpp"

#include <cmath>
#include <stdexcept>

namespace wz {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// x - (1 + x/2)(1 - e^{-x}), which is O(x^3); the series avoids cancellation.
double transition_gap(double x) {
  if (x > 0.5) return x - (1.0 + 0.5 * x) * (-std::expm1(-x));
  double term = 0.5 * x * x;  // x^n / n! for n = 2
  double sum = 0.0;
  for (int n = 3; n <= 20; ++n) {
    term *= -x / n;  // (-1)^n x^n / n!
    sum += term * (2.0 - n) / 2.0;
  }
  return sum;
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t replica, std::uint64_t channel,
                          std::uint64_t salt) {
  std::uint64_t s = splitmix64(master ^ splitmix64(salt));
  s = splitmix64(s ^ replica);
  s = splitmix64(s ^ (channel + 0x632be59bd9b4e019ULL));
  return s;
}

OuTransition::OuTransition(double eps, double step) : epsilon(eps), dt(step) {
  if (!(eps > 0.0)) throw std::invalid_argument("OuTransition: epsilon must be > 0");
  if (!(step > 0.0)) throw std::invalid_argument("OuTransition: dt must be > 0");
  const double x = dt / (eps * eps);
  const double one_minus_a = -std::expm1(-x);
  decay = std::exp(-x);
  regression = one_minus_a / dt;
  // s^2 dt = (1 - a) * gap(x), the residual variance of I given Delta beta.
  conditional_sd = std::sqrt(std::max(0.0, one_minus_a * transition_gap(x) / dt));
}

NoiseDriver::NoiseDriver(std::size_t channels, double epsilon, double dt, std::uint64_t master_seed,
                         std::uint64_t replica, OuStart start)
    : transition_(epsilon, dt) {
  seed_streams(master_seed, replica, channels);
  eta_.assign(channels, 0.0);
  const double sd = std::sqrt(transition_.stationary_variance());
  for (std::size_t k = 0; k < channels; ++k) {
    // The initial draw is always consumed so both starts share later increments.
    const double z = normals_[k](streams_[k]);
    if (start == OuStart::Stationary) eta_[k] = sd * z;
  }
  eta_prev_ = eta_;
  beta_.assign(channels, 0.0);
  dbeta_.assign(channels, 0.0);
  forcing_.assign(channels, 0.0);
  integrated_.assign(channels, 0.0);
}

NoiseDriver::NoiseDriver(std::size_t channels, double epsilon, double dt, std::uint64_t master_seed,
                         std::uint64_t replica, std::span<const double> eta0)
    : NoiseDriver(channels, epsilon, dt, master_seed, replica, OuStart::Zero) {
  if (eta0.size() != channels) throw std::invalid_argument("NoiseDriver: eta0 size mismatch");
  eta_.assign(eta0.begin(), eta0.end());
  eta_prev_ = eta_;
}

void NoiseDriver::seed_streams(std::uint64_t master_seed, std::uint64_t replica, std::size_t channels) {
  streams_.clear();
  streams_.reserve(channels);
  for (std::size_t k = 0; k < channels; ++k) streams_.emplace_back(stream_seed(master_seed, replica, k));
  normals_.assign(channels, std::normal_distribution<double>());
}

void NoiseDriver::step() {
  const double eps2 = transition_.epsilon * transition_.epsilon;
  const double sqdt = std::sqrt(transition_.dt);
  for (std::size_t k = 0; k < eta_.size(); ++k) {
    const double z1 = normals_[k](streams_[k]);
    const double z2 = normals_[k](streams_[k]);
    const double db = sqdt * z1;
    const double forcing = transition_.regression * db + transition_.conditional_sd * z2;
    eta_prev_[k] = eta_[k];
    eta_[k] = transition_.decay * eta_[k] + forcing;
    dbeta_[k] = db;
    forcing_[k] = forcing;
    beta_[k] += db;
    integrated_[k] = db - eps2 * (eta_[k] - eta_prev_[k]);
  }
  ++steps_;
}

NoiseIncrement NoiseDriver::increment() const {
  NoiseIncrement inc;
  inc.t0 = steps_ > 0 ? static_cast<double>(steps_ - 1) * transition_.dt : 0.0;
  inc.dt = transition_.dt;
  inc.epsilon = transition_.epsilon;
  inc.decay = transition_.decay;
  inc.eta_start = eta_prev_;
  inc.eta_end = eta_;
  inc.dbeta = dbeta_;
  inc.ou_forcing = forcing_;
  inc.integrated_eta = integrated_;
  return inc;
}

DriverHistory::DriverHistory(const NoiseDriver& d) : dt_(d.dt()), epsilon_(d.epsilon()) {
  if (d.steps() != 0) throw std::invalid_argument("DriverHistory: driver must be at step 0");
  record(d);
}

void DriverHistory::record(const NoiseDriver& d) {
  if (d.steps() != static_cast<long>(beta_.size()))
    throw std::invalid_argument("DriverHistory: steps must be recorded in order");
  beta_.emplace_back(d.beta().begin(), d.beta().end());
  eta_.emplace_back(d.eta().begin(), d.eta().end());
}

long DriverHistory::step_of(double t) const {
  const double r = t / dt_;
  const long s = std::lround(r);
  if (std::abs(r - static_cast<double>(s)) > 1e-9 * std::max(1.0, std::abs(r)) || s < 0 || s > last_step())
    throw std::invalid_argument("DriverHistory: time is not a recorded step");
  return s;
}

double integrated_ou(const DriverHistory& h, std::size_t channel, double s, double t) {
  const long a = h.step_of(s);
  const long b = h.step_of(t);
  const double eps2 = h.epsilon() * h.epsilon();
  return (h.beta(b, channel) - h.beta(a, channel)) - eps2 * (h.eta(b, channel) - h.eta(a, channel));
}

}  // namespace wz
