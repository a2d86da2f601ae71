#include "wz/stochastic/noise_basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wz/torus/spectral.hpp"

namespace wz {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double norm2(const NoiseMode& m) { return static_cast<double>(m.k1) * m.k1 + static_cast<double>(m.k2) * m.k2; }

// A / (2 pi |k|^2): magnitude factor of sigma along k^perp.
double sigma_factor(const NoiseMode& m) { return m.amplitude / (kTwoPi * norm2(m)); }

}  // namespace

std::vector<std::array<int, 2>> half_lattice(int k_max) {
  std::vector<std::array<int, 2>> out;
  for (int k1 = 0; k1 <= k_max; ++k1)
    for (int k2 = -k_max; k2 <= k_max; ++k2) {
      if (k1 == 0 && k2 <= 0) continue;
      out.push_back({k1, k2});
    }
  return out;
}

NoiseBasis NoiseBasis::empty(Grid grid) { return NoiseBasis(grid); }

NoiseBasis NoiseBasis::build(int k_max, double decay, double amplitude, Grid grid) {
  if (k_max < 1) throw std::invalid_argument("NoiseBasis: K_max must be >= 1");
  if (k_max >= grid.n() / 2) throw std::invalid_argument("NoiseBasis: K_max must be below the Nyquist index");
  if (!(decay > 0.0)) throw std::invalid_argument("NoiseBasis: decay exponent must be > 0");
  NoiseBasis b(grid);
  b.k_max_ = k_max;
  b.decay_ = decay;
  b.amplitude_ = amplitude;
  for (auto [k1, k2] : half_lattice(k_max)) {
    const double q = amplitude * std::pow(std::hypot(k1, k2), -(3.0 + decay));
    for (Phase ph : {Phase::Cos, Phase::Sin}) b.modes_.push_back({k1, k2, ph, q, std::sqrt(2.0) * q});
    b.waves_.push_back({k1, k2, sigma_factor(b.modes_.back())});
  }
  std::vector<double> unit(b.modes_.size(), 0.0);
  for (std::size_t k = 0; k < b.modes_.size(); ++k) {
    unit[k] = 1.0;
    SpectralField hat = b.theta_spectral(unit);
    unit[k] = 0.0;
    b.theta_.push_back(from_spectral(hat));
    b.sigma_.push_back(biot_savart(hat));
  }
  return b;
}

void NoiseBasis::fill_phasors(const TorusPoint& p, std::vector<Phasor>& ex, std::vector<Phasor>& ey) const {
  const int K = k_max_;
  ex.resize(K + 1);
  ey.resize(2 * K + 1);
  const Phasor zx{std::cos(kTwoPi * p.x), std::sin(kTwoPi * p.x)};
  const Phasor zy{std::cos(kTwoPi * p.y), std::sin(kTwoPi * p.y)};
  ex[0] = {1.0, 0.0};
  ey[K] = {1.0, 0.0};
  for (int j = 1; j <= K; ++j) {
    const Phasor& a = ex[j - 1];
    ex[j] = {a.re * zx.re - a.im * zx.im, a.re * zx.im + a.im * zx.re};
    const Phasor& b = ey[K + j - 1];
    ey[K + j] = {b.re * zy.re - b.im * zy.im, b.re * zy.im + b.im * zy.re};
    ey[K - j] = {ey[K + j].re, -ey[K + j].im};
  }
}

double NoiseBasis::theta_at(std::size_t k, const TorusPoint& p) const {
  const NoiseMode& m = modes_.at(k);
  const double ph = kTwoPi * (m.k1 * p.x + m.k2 * p.y);
  return m.amplitude * (m.phase == Phase::Cos ? std::cos(ph) : std::sin(ph));
}

Vec2 NoiseBasis::theta_gradient_at(std::size_t k, const TorusPoint& p) const {
  const NoiseMode& m = modes_.at(k);
  const double ph = kTwoPi * (m.k1 * p.x + m.k2 * p.y);
  const double s = m.phase == Phase::Cos ? -std::sin(ph) : std::cos(ph);
  return {m.amplitude * kTwoPi * m.k1 * s, m.amplitude * kTwoPi * m.k2 * s};
}

Vec2 NoiseBasis::sigma_at(std::size_t k, const TorusPoint& p) const {
  const NoiseMode& m = modes_.at(k);
  const double ph = kTwoPi * (m.k1 * p.x + m.k2 * p.y);
  const double s = sigma_factor(m) * (m.phase == Phase::Cos ? std::sin(ph) : -std::cos(ph));
  return {-m.k2 * s, m.k1 * s};
}

Mat2 NoiseBasis::sigma_jacobian_at(std::size_t k, const TorusPoint& p) const {
  const NoiseMode& m = modes_.at(k);
  const double ph = kTwoPi * (m.k1 * p.x + m.k2 * p.y);
  const double s = sigma_factor(m) * kTwoPi * (m.phase == Phase::Cos ? std::cos(ph) : std::sin(ph));
  const double kp[2] = {static_cast<double>(-m.k2), static_cast<double>(m.k1)};
  const double kk[2] = {static_cast<double>(m.k1), static_cast<double>(m.k2)};
  Mat2 J;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) J(a, b) = s * kp[a] * kk[b];
  return J;
}

void NoiseBasis::sigma_all_at(const TorusPoint& p, std::span<Vec2> out) const {
  if (out.size() != modes_.size()) throw std::invalid_argument("sigma_all_at: channel count mismatch");
  thread_local std::vector<Phasor> ex, ey;
  fill_phasors(p, ex, ey);
  for (std::size_t w = 0; w < waves_.size(); ++w) {
    const Wave& m = waves_[w];
    const Phasor& a = ex[m.k1];
    const Phasor& b = ey[k_max_ + m.k2];
    const double re = a.re * b.re - a.im * b.im, im = a.re * b.im + a.im * b.re;
    out[2 * w] = {-m.k2 * m.coef * im, m.k1 * m.coef * im};
    out[2 * w + 1] = {m.k2 * m.coef * re, -m.k1 * m.coef * re};
  }
}

Vec2 NoiseBasis::combination_at(const TorusPoint& p, std::span<const double> weights) const {
  if (weights.size() != modes_.size()) throw std::invalid_argument("combination_at: channel count mismatch");
  thread_local std::vector<Phasor> ex, ey;
  fill_phasors(p, ex, ey);
  double vx = 0.0, vy = 0.0;
  for (std::size_t w = 0; w < waves_.size(); ++w) {
    const Wave& m = waves_[w];
    const Phasor& a = ex[m.k1];
    const Phasor& b = ey[k_max_ + m.k2];
    const double re = a.re * b.re - a.im * b.im, im = a.re * b.im + a.im * b.re;
    const double s = m.coef * (weights[2 * w] * im - weights[2 * w + 1] * re);
    vx -= m.k2 * s;
    vy += m.k1 * s;
  }
  return {vx, vy};
}

SpectralField NoiseBasis::theta_spectral(std::span<const double> weights) const {
  if (weights.size() != modes_.size()) throw std::invalid_argument("theta_spectral: channel count mismatch");
  SpectralField hat(grid_);
  for (std::size_t k = 0; k < modes_.size(); ++k) {
    const NoiseMode& m = modes_[k];
    const double a = 0.5 * m.amplitude * weights[k];
    hat.add_real_mode(m.k1, m.k2, m.phase == Phase::Cos ? std::complex<double>(a, 0.0) : std::complex<double>(0.0, -a));
  }
  return hat;
}

double NoiseBasis::gradient_sum() const {
  double s = 0.0;
  for (const auto& m : modes_) s += m.amplitude * kTwoPi * std::sqrt(norm2(m));
  return s;
}

double NoiseBasis::sigma_hessian_sum() const {
  // |d_b d_c sigma^a| = A/(2 pi |k|^2) (2 pi)^2 |k^perp_a k_b k_c|; the R^8 norm is 2 pi A |k|.
  double s = 0.0;
  for (const auto& m : modes_) s += kTwoPi * m.amplitude * std::sqrt(norm2(m));
  return s;
}

double NoiseBasis::sigma_sup() const {
  double s = 0.0;
  for (const auto& m : modes_) s = std::max(s, sigma_factor(m) * std::sqrt(norm2(m)));
  return s;
}

}  // namespace wz
