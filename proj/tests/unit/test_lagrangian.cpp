#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "test_support.hpp"
#include "wz/lagrangian/flow.hpp"
#include "wz/lagrangian/interpolator.hpp"
#include "wz/stochastic/ou_checks.hpp"
#include "wz/torus/spectral.hpp"

using namespace wz;
using wz::testing::kPi;
using wz::testing::random_band_limited;

namespace {

struct ManualIncrement {
  std::vector<double> eta0, eta1, dbeta, forcing, integrated;
  NoiseIncrement inc;

  ManualIncrement(std::size_t channels, double eps, double dt)
      : eta0(channels), eta1(channels), dbeta(channels), forcing(channels), integrated(channels) {
    inc.dt = dt;
    inc.epsilon = eps;
    inc.decay = std::exp(-dt / (eps * eps));
    inc.eta_start = eta0;
    inc.eta_end = eta1;
    inc.dbeta = dbeta;
    inc.ou_forcing = forcing;
    inc.integrated_eta = integrated;
  }
};

double max_position_gap(const FlowMap& a, const FlowMap& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, geodesic_distance(a[k], b[k]));
  return m;
}

// Classical RK4 on the interpolated field, used as a reference for Heun.
TorusPoint rk4(const VectorInterpolator& v, TorusPoint x, double dt) {
  const Vec2 k1 = v(x);
  const Vec2 k2 = v(x.shifted(0.5 * dt * k1));
  const Vec2 k3 = v(x.shifted(0.5 * dt * k2));
  const Vec2 k4 = v(x.shifted(dt * k3));
  return x.shifted(dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

}  // namespace

TEST_CASE("cubic interpolation") {
  const Grid g(32);
  ScalarField f = random_band_limited(g, 3, 1);
  const Interpolator interp(f);

  SUBCASE("exact at nodes and on constants") {
    for (int i = 0; i < g.n(); ++i)
      for (int j = 0; j < g.n(); ++j) REQUIRE(interp({i * g.h(), j * g.h()}) == doctest::Approx(f(i, j)).epsilon(1e-14));
    ScalarField c = ScalarField::sample(g, [](double, double) { return 2.5; });
    const Interpolator ic(c);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 1);
    for (int k = 0; k < 100; ++k) REQUIRE(ic({u(rng), u(rng)}) == doctest::Approx(2.5).epsilon(1e-14));
  }

  SUBCASE("weights sum to one and reproduce cubics") {
    for (double t : {0.0, 0.1, 0.5, 0.77}) {
      auto w = cubic_weights(t);
      CHECK(w[0] + w[1] + w[2] + w[3] == doctest::Approx(1.0));
      const double nodes[] = {-1, 0, 1, 2};
      double cubic = 0.0;
      for (int a = 0; a < 4; ++a) cubic += w[a] * nodes[a] * nodes[a] * nodes[a];
      CHECK(cubic == doctest::Approx(t * t * t));
    }
  }

  SUBCASE("fourth-order convergence on a smooth field") {
    auto f_exact = [](double x, double y) { return std::sin(2 * kPi * x) * std::cos(2 * kPi * (x + 2 * y)); };
    std::vector<TorusPoint> pts;
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0, 1);
    for (int k = 0; k < 200; ++k) pts.push_back({u(rng), u(rng)});
    double err[2];
    int n = 32;
    for (double& e : err) {
      ScalarField fn = ScalarField::sample(Grid(n), f_exact);
      const Interpolator in(fn);
      e = 0.0;
      for (const auto& p : pts) e = std::max(e, std::abs(in(p) - f_exact(p.x, p.y)));
      n *= 2;
    }
    CHECK(err[0] / err[1] > 12.0);
    CHECK(err[1] < 1e-4);
  }

  SUBCASE("vector interpolation matches the scalar one") {
    VectorField u = biot_savart(f);
    const VectorInterpolator vi(u);
    const Interpolator a(u.u1), b(u.u2);
    const TorusPoint p{0.123, 0.987};
    CHECK(vi(p).x == a(p));
    CHECK(vi(p).y == b(p));
  }
}

TEST_CASE("flow map basics") {
  FlowMap fm(8);
  CHECK(fm.size() == 64);
  CHECK(fm[9].x == doctest::Approx(1.0 / 8));
  CHECK(fm[9].y == doctest::Approx(1.0 / 8));
  CHECK(fm.label(9).x == fm[9].x);

  const Grid g(16);
  SUBCASE("zero velocity and zero basis leave the map unchanged") {
    FlowMap a(8);
    ManualIncrement mi(0, 0.1, 1e-3);
    step_simplified(a, VectorField(g), NoiseBasis::empty(g), mi.inc);
    CHECK(max_position_gap(a, FlowMap(8)) == 0.0);
    CHECK(a.time() == doctest::Approx(1e-3));
  }
  SUBCASE("constant velocity shifts exactly") {
    VectorField u(ScalarField::sample(g, [](double, double) { return 1.0; }), ScalarField(g));
    FlowMap a(8);
    ManualIncrement mi(0, 1.0, 0.25);
    step_simplified(a, u, NoiseBasis::empty(g), mi.inc);
    FlowMap expect = FlowMap(8).shifted({0.25, 0.0});
    CHECK(max_position_gap(a, expect) < 1e-14);
    FlowMap b(8);
    step_limit(b, u, NoiseBasis::empty(g), CorrectorField{VectorField(g), 0.0}, mi.inc);
    CHECK(max_position_gap(b, expect) < 1e-14);
  }
  SUBCASE("the eps^2 step constraint is enforced when noise is present") {
    NoiseBasis basis = NoiseBasis::build(1, 1.0, 0.5, g);
    ManualIncrement mi(basis.channel_count(), 0.1, 2e-3);
    FlowMap a(4);
    CHECK_THROWS_AS(step_simplified(a, VectorField(g), basis, mi.inc), std::invalid_argument);
    ManualIncrement ok(basis.channel_count(), 0.1, 1e-3);
    CHECK_NOTHROW(step_simplified(a, VectorField(g), basis, ok.inc));
  }
}

TEST_CASE("Heun local error against RK4") {
  const Grid g(32);
  VectorField u = biot_savart(random_band_limited(g, 3, 7));
  const VectorInterpolator vi(u);
  double errs[2];
  double dt = 0.02;
  for (double& e : errs) {
    FlowMap a(16);
    ManualIncrement mi(0, 1.0, dt);
    step_simplified(a, u, NoiseBasis::empty(g), mi.inc);
    e = 0.0;
    FlowMap start(16);
    for (std::size_t k = 0; k < a.size(); ++k) e = std::max(e, geodesic_distance(a[k], rk4(vi, start[k], dt)));
    dt /= 2;
  }
  CHECK(errs[0] / errs[1] > 6.0);
  CHECK(errs[0] / errs[1] < 10.0);
}

TEST_CASE("limit stepper") {
  const Grid g(32);
  VectorField u = biot_savart(random_band_limited(g, 3, 9));

  SUBCASE("zero basis reduces to the deterministic step bitwise") {
    FlowMap a(16), b(16), c(16);
    ManualIncrement mi(0, 0.1, 1e-3);
    for (int s = 0; s < 20; ++s) {
      step_limit(a, u, NoiseBasis::empty(g), CorrectorField{VectorField(g), 0.0}, mi.inc);
      step_simplified(b, u, NoiseBasis::empty(g), mi.inc);
      step_deterministic(c, u, 1e-3);
    }
    for (std::size_t k = 0; k < a.size(); ++k) {
      REQUIRE(a[k].x == b[k].x);
      REQUIRE(a[k].y == c[k].y);
    }
  }

  SUBCASE("shear channel gives an exact Brownian shift with the right law") {
    // The cosine channel of k = (1, 0) is sigma = (0, c sin(2 pi x1)); it moves
    // labels along x2 only, so sigma is constant along each path.
    NoiseBasis basis = NoiseBasis::build(1, 1.0, 0.8, g);
    std::size_t channel = 0;
    for (std::size_t k = 0; k < basis.channel_count(); ++k)
      if (basis.modes()[k].k1 == 1 && basis.modes()[k].k2 == 0 && basis.modes()[k].phase == Phase::Cos) channel = k;
    const CorrectorField c = corrector(basis);
    const double dt = 0.01, T = 0.5;
    const int steps = 50, reps = 4000;
    std::mt19937_64 rng(12);
    std::normal_distribution<double> normal;
    const TorusPoint x0{0.3, 0.6};
    const double amp = basis.sigma_at(channel, x0).y;
    std::vector<double> disp(reps);
    for (int r = 0; r < reps; ++r) {
      FlowMap fm(1);
      fm[0] = x0;
      double beta = 0.0;
      for (int s = 0; s < steps; ++s) {
        ManualIncrement mi(basis.channel_count(), 0.1, dt);
        mi.dbeta[channel] = std::sqrt(dt) * normal(rng);
        beta += mi.dbeta[channel];
        step_limit(fm, VectorField(g), basis, c, mi.inc);
      }
      const Vec2 d = torus_displacement(x0, fm[0]);
      REQUIRE(std::abs(d.x) < 1e-14);
      REQUIRE(std::abs(minimal_image(d.y - amp * beta)) < 1e-12);
      disp[r] = amp * beta;
    }
    for (double& d : disp) d *= d;
    Estimate v = estimate(disp);
    CHECK(std::abs(v.mean - amp * amp * T) < 3.5 * v.std_error);
  }

  SUBCASE("weak error against a finer reference shrinks with dt") {
    NoiseBasis basis = NoiseBasis::build(2, 1.0, 0.9, g);
    const CorrectorField c = corrector(basis);
    const double T = 0.2;
    const int fine_steps = 200, reps = 300;
    auto f = [](const TorusPoint& p) { return std::cos(2 * kPi * p.x) * std::sin(2 * kPi * (p.x + p.y)); };
    std::vector<double> gaps;
    for (int coarse_steps : {5, 20}) {
      const int ratio = fine_steps / coarse_steps;
      std::mt19937_64 rng(21);
      std::normal_distribution<double> normal;
      double mean_gap = 0.0;
      for (int r = 0; r < reps; ++r) {
        FlowMap coarse(4), fine(4);
        for (int s = 0; s < coarse_steps; ++s) {
          ManualIncrement big(basis.channel_count(), 1.0, T / coarse_steps);
          for (int q = 0; q < ratio; ++q) {
            ManualIncrement small(basis.channel_count(), 1.0, T / fine_steps);
            for (std::size_t k = 0; k < basis.channel_count(); ++k) {
              small.dbeta[k] = std::sqrt(small.inc.dt) * normal(rng);
              big.dbeta[k] += small.dbeta[k];
            }
            step_limit(fine, u, basis, c, small.inc);
          }
          step_limit(coarse, u, basis, c, big.inc);
        }
        for (std::size_t k = 0; k < coarse.size(); ++k) mean_gap += f(coarse[k]) - f(fine[k]);
      }
      gaps.push_back(std::abs(mean_gap) / (reps * 16.0));
    }
    CHECK(gaps[1] < gaps[0]);
    CHECK(gaps[0] < 0.05);
  }
}

TEST_CASE("measure preservation defect") {
  const Grid g(32);
  ScalarField f = random_band_limited(g, 3, 2);
  SUBCASE("identity") {
    auto r = measure_preservation_defect(FlowMap(32), f);
    CHECK(r.defect < 1e-14);
    CHECK(r.jacobian_min == doctest::Approx(1.0));
    CHECK(r.jacobian_max == doctest::Approx(1.0));
  }
  SUBCASE("constant shift") {
    auto r = measure_preservation_defect(FlowMap(32).shifted({0.013, -0.021}), f);
    CHECK(r.defect < 1e-5);
    CHECK(r.jacobian_mean == doctest::Approx(1.0));
  }
  SUBCASE("integrated divergence-free flow, refined") {
    // The pushed Riemann sum of a smooth f is spectrally accurate, so the defect
    // sits at rounding level; the Jacobian spread carries the O(dt^2 + h^4) error.
    double spread[2];
    int n = 32;
    for (double& d : spread) {
      const Grid gn(n);
      VectorField u = biot_savart(ScalarField::sample(gn, [](double x, double y) {
        return std::sin(2 * kPi * x) * std::cos(2 * kPi * y) + 0.5 * std::cos(2 * kPi * (x - 2 * y));
      }));
      ScalarField fn = ScalarField::sample(gn, [](double x, double y) { return std::cos(2 * kPi * (x + y)); });
      FlowMap fm(n);
      const double dt = 0.02 * 32.0 / n;
      for (double t = 0; t < 0.5 - 1e-12; t += dt) step_deterministic(fm, u, dt);
      auto r = measure_preservation_defect(fm, fn);
      CHECK(r.defect < 1e-8);
      d = std::max(r.jacobian_max - 1.0, 1.0 - r.jacobian_min);
      n *= 2;
    }
    CHECK(spread[1] < spread[0]);
    CHECK(spread[0] < 0.05);
  }
  CHECK_THROWS_AS(measure_preservation_defect(FlowMap(16), f), std::invalid_argument);
}

TEST_CASE("label separation") {
  FlowMap fm(16);
  LabelSeparation s = label_separation(fm);
  CHECK(s.min_ratio == doctest::Approx(1.0));
  CHECK(s.max_ratio == doctest::Approx(1.0));
  CHECK(label_separation(fm.shifted({0.3, -0.7})).min_ratio == doctest::Approx(1.0));
  fm[5 * 16 + 5] = fm[5 * 16 + 5].shifted({0.5 / 16, 0.0});
  s = label_separation(fm);
  CHECK(s.min_ratio == doctest::Approx(0.5));
  CHECK(s.max_ratio == doctest::Approx(1.5));
}

TEST_CASE("l1 flow distance") {
  FlowMap a(16);
  CHECK(l1_flow_distance(a, a) == 0.0);
  CHECK(l1_flow_distance(a, a.shifted({0.25, 0})) == doctest::Approx(0.25));
  CHECK(l1_flow_distance(a, a.shifted({0.75, 0})) == doctest::Approx(0.25));
  CHECK_THROWS_AS(l1_flow_distance(a, FlowMap(8)), std::invalid_argument);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 50; ++t) {
    FlowMap x(8), y(8), z(8);
    for (std::size_t k = 0; k < x.size(); ++k) {
      x[k] = {u(rng), u(rng)};
      y[k] = {u(rng), u(rng)};
      z[k] = {u(rng), u(rng)};
    }
    REQUIRE(l1_flow_distance(x, y) == l1_flow_distance(y, x));
    REQUIRE(l1_flow_distance(x, z) <= l1_flow_distance(x, y) + l1_flow_distance(y, z) + 1e-15);
  }
}

TEST_CASE("backward flow") {
  const Grid g(32);
  SUBCASE("s = t is the identity and missing records throw") {
    VelocityHistory h(0.0, 0.01);
    for (int k = 0; k <= 10; ++k) h.record(biot_savart(random_band_limited(g, 2, 3)));
    CHECK(max_position_gap(backward_flow(h, 0.05, 0.05, 8), FlowMap(8)) == 0.0);
    CHECK_THROWS_AS(backward_flow(h, 0.0, 0.2, 8), std::out_of_range);
    CHECK_THROWS_AS(backward_flow(h, -0.01, 0.05, 8), std::out_of_range);
  }
  SUBCASE("constant velocity") {
    VelocityHistory h(0.0, 0.1);
    for (int k = 0; k <= 5; ++k)
      h.record(VectorField(ScalarField::sample(g, [](double, double) { return 0.3; }),
                           ScalarField::sample(g, [](double, double) { return -0.2; })));
    CHECK(max_position_gap(backward_flow(h, 0.1, 0.4, 8), FlowMap(8).shifted({0.09, -0.06})) < 1e-13);
    CHECK(max_position_gap(backward_flow(h, 0.1, 0.4, 8, true), FlowMap(8).shifted({-0.09, 0.06})) < 1e-13);
  }
  SUBCASE("composition and inversion") {
    VelocityHistory h(0.0, 0.01);
    for (int k = 0; k <= 40; ++k) {
      const double t = 0.01 * k;
      h.record(biot_savart(ScalarField::sample(g, [t](double x, double y) {
        return std::sin(2 * kPi * (x + t)) + 0.7 * std::cos(2 * kPi * (x + 2 * y - t));
      })));
    }
    FlowMap start(16);
    auto mid = transport_points(h, 0.0, 0.2, start.positions());
    auto two_legs = transport_points(h, 0.2, 0.4, mid);
    auto direct = transport_points(h, 0.0, 0.4, start.positions());
    double comp = 0.0;
    for (std::size_t k = 0; k < direct.size(); ++k) comp = std::max(comp, geodesic_distance(two_legs[k], direct[k]));
    CHECK(comp < 1e-12);  // legs align with the record grid, so composition is exact

    auto odd = transport_points(h, 0.0, 0.137, start.positions());
    auto rest = transport_points(h, 0.137, 0.4, odd);
    double gap = 0.0;
    for (std::size_t k = 0; k < direct.size(); ++k) gap = std::max(gap, geodesic_distance(rest[k], direct[k]));
    CHECK(gap < 0.01 * 0.4);

    auto back = transport_points(h, 0.4, 0.0, direct);
    double inv = 0.0;
    for (std::size_t k = 0; k < back.size(); ++k) inv = std::max(inv, geodesic_distance(back[k], start[k]));
    CHECK(inv < 1e-4);
  }
}
