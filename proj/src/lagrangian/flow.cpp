#include "wz/lagrangian/flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "wz/lagrangian/interpolator.hpp"

namespace wz {

FlowMap::FlowMap(int m) : m_(m) {
  if (m < 1) throw std::invalid_argument("FlowMap: m must be positive");
  positions_.reserve(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) positions_.emplace_back(static_cast<double>(i) / m, static_cast<double>(j) / m);
}

TorusPoint FlowMap::label(std::size_t k) const {
  const int i = static_cast<int>(k / m_), j = static_cast<int>(k % m_);
  return {static_cast<double>(i) / m_, static_cast<double>(j) / m_};
}

FlowMap FlowMap::shifted(const Vec2& d) const {
  FlowMap out = *this;
  for (auto& p : out.positions_) p = p.shifted(d);
  return out;
}

void step_simplified(FlowMap& fm, const VectorField& u, const NoiseBasis& basis, const NoiseIncrement& inc) {
  const double dt = inc.dt;
  const bool noisy = basis.channel_count() > 0;
  if (noisy && dt > inc.epsilon * inc.epsilon / 10.0 * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "step_simplified: dt = " << dt << " exceeds eps^2/10 = " << inc.epsilon * inc.epsilon / 10.0
        << " for eps = " << inc.epsilon;
    throw std::invalid_argument(msg.str());
  }
  if (noisy && inc.integrated_eta.size() != basis.channel_count())
    throw std::invalid_argument("step_simplified: increment and basis channel counts differ");
  const VectorInterpolator vel(u);
  for (auto& x : fm.positions()) {
    const Vec2 u0 = vel(x);
    const Vec2 s0 = noisy ? basis.combination_at(x, inc.integrated_eta) : Vec2{};
    const TorusPoint xp = x.shifted(u0 * dt + s0);
    const Vec2 u1 = vel(xp);
    const Vec2 s1 = noisy ? basis.combination_at(xp, inc.integrated_eta) : Vec2{};
    x = x.shifted(0.5 * dt * (u0 + u1) + 0.5 * (s0 + s1));
  }
  fm.advance_time(dt);
}

void step_limit(FlowMap& fm, const VectorField& u, const NoiseBasis& basis, const CorrectorField& corrector,
                const NoiseIncrement& inc, LimitStepTrace* trace) {
  const double dt = inc.dt;
  const bool noisy = basis.channel_count() > 0;
  if (noisy && inc.dbeta.size() != basis.channel_count())
    throw std::invalid_argument("step_limit: increment and basis channel counts differ");
  const bool drift_correction = noisy && !corrector.vanishes();
  const VectorInterpolator vel(u);
  auto drift = [&](const TorusPoint& p) {
    Vec2 v = vel(p);
    if (drift_correction) v += corrector_at(basis, p);
    return v;
  };
  if (trace) {
    trace->start.resize(fm.size());
    trace->predictor.resize(fm.size());
    trace->drift_start.resize(fm.size());
    trace->drift_predictor.resize(fm.size());
  }
  auto pos = fm.positions();
  for (std::size_t k = 0; k < pos.size(); ++k) {
    const TorusPoint x = pos[k];
    const Vec2 v0 = drift(x);
    const TorusPoint xp = x.shifted(v0 * dt);
    const Vec2 v1 = drift(xp);
    const Vec2 noise = noisy ? basis.combination_at(x, inc.dbeta) : Vec2{};
    pos[k] = x.shifted(0.5 * dt * (v0 + v1) + noise);
    if (trace) {
      trace->start[k] = x;
      trace->predictor[k] = xp;
      trace->drift_start[k] = v0;
      trace->drift_predictor[k] = v1;
    }
  }
  fm.advance_time(dt);
}

void step_deterministic(FlowMap& fm, const VectorField& u, double dt) {
  const VectorInterpolator vel(u);
  for (auto& x : fm.positions()) {
    const Vec2 u0 = vel(x);
    const Vec2 u1 = vel(x.shifted(u0 * dt));
    x = x.shifted(0.5 * dt * (u0 + u1));
  }
  fm.advance_time(dt);
}

MeasurePreservation measure_preservation_defect(const FlowMap& fm, const ScalarField& f) {
  const int m = fm.m();
  if (m != f.grid().n()) throw std::invalid_argument("measure_preservation_defect: label grid must match f");
  const Interpolator interp(f);
  const double w = 1.0 / (static_cast<double>(m) * m);
  double pushed = 0.0, plain = 0.0;
  for (std::size_t k = 0; k < fm.size(); ++k) {
    pushed += interp(fm[k]);
    plain += f[k];
  }
  MeasurePreservation out;
  out.defect = std::abs(pushed - plain) * w;

  const double inv = 0.5 * m;  // 1 / (2 h)
  out.jacobian_min = INFINITY;
  out.jacobian_max = -INFINITY;
  double sum = 0.0;
  auto at = [&](int i, int j) { return fm[static_cast<std::size_t>(((i % m) + m) % m) * m + ((j % m) + m) % m]; };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const Vec2 d1 = torus_displacement(at(i - 1, j), at(i + 1, j)) * inv;
      const Vec2 d2 = torus_displacement(at(i, j - 1), at(i, j + 1)) * inv;
      const double det = d1.x * d2.y - d1.y * d2.x;
      out.jacobian_min = std::min(out.jacobian_min, det);
      out.jacobian_max = std::max(out.jacobian_max, det);
      sum += det;
    }
  out.jacobian_mean = sum * w;
  return out;
}

LabelSeparation label_separation(const FlowMap& fm) {
  const int m = fm.m();
  LabelSeparation out{INFINITY, 0.0};
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const TorusPoint& p = fm[static_cast<std::size_t>(i) * m + j];
      for (const TorusPoint* q : {&fm[static_cast<std::size_t>((i + 1) % m) * m + j],
                                  &fm[static_cast<std::size_t>(i) * m + (j + 1) % m]}) {
        const double r = geodesic_distance(p, *q) * m;
        out.min_ratio = std::min(out.min_ratio, r);
        out.max_ratio = std::max(out.max_ratio, r);
      }
    }
  return out;
}

double l1_flow_distance(const FlowMap& a, const FlowMap& b) {
  if (a.m() != b.m()) throw std::invalid_argument("l1_flow_distance: label grids differ");
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += geodesic_distance(a[k], b[k]);
  return s / static_cast<double>(a.size());
}

Vec2 VelocityHistory::velocity(double t, const TorusPoint& p) const {
  if (fields_.empty()) throw std::out_of_range("VelocityHistory: no records");
  const double tol = 1e-9 * dt_;
  if (t < t0_ - tol || t > end() + tol) throw std::out_of_range("VelocityHistory: time outside the records");
  const double r = std::clamp((t - t0_) / dt_, 0.0, static_cast<double>(fields_.size() - 1));
  std::size_t k = static_cast<std::size_t>(std::floor(r));
  if (k + 1 >= fields_.size()) return VectorInterpolator(fields_.back())(p);
  const double theta = r - static_cast<double>(k);
  const Vec2 a = VectorInterpolator(fields_[k])(p);
  if (theta < 1e-12) return a;
  const Vec2 b = VectorInterpolator(fields_[k + 1])(p);
  return (1.0 - theta) * a + theta * b;
}

std::vector<TorusPoint> transport_points(const VelocityHistory& history, double s, double t,
                                         std::span<const TorusPoint> points, int refine) {
  const double lo = std::min(s, t), hi = std::max(s, t);
  const double tol = 1e-9 * history.dt();
  if (history.size() == 0 || lo < history.start() - tol || hi > history.end() + tol)
    throw std::out_of_range("transport_points: interval not covered by the velocity records");
  std::vector<TorusPoint> out(points.begin(), points.end());
  if (s == t) return out;
  const double span = t - s;
  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(span) / history.dt() * refine - 1e-9)));
  const double h = span / steps;
  for (int n = 0; n < steps; ++n) {
    const double r0 = s + n * h, r1 = (n + 1 == steps) ? t : s + (n + 1) * h;
    for (auto& x : out) {
      const Vec2 v0 = history.velocity(r0, x);
      const Vec2 v1 = history.velocity(r1, x.shifted(v0 * h));
      x = x.shifted(0.5 * h * (v0 + v1));
    }
  }
  return out;
}

FlowMap backward_flow(const VelocityHistory& history, double s, double t, int m, bool inverse, int refine) {
  FlowMap fm(m);
  const auto moved = inverse ? transport_points(history, t, s, fm.positions(), refine)
                             : transport_points(history, s, t, fm.positions(), refine);
  std::copy(moved.begin(), moved.end(), fm.positions().begin());
  fm.set_time(t);
  return fm;
}

}  // namespace wz
