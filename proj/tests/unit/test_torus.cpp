#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "test_support.hpp"
#include "wz/torus/modulus.hpp"
#include "wz/torus/norms.hpp"
#include "wz/torus/spectral.hpp"

using namespace wz;
using wz::testing::kPi;
using wz::testing::max_abs_diff;
using wz::testing::random_band_limited;

TEST_CASE("grid rejects odd or tiny sizes") {
  CHECK_THROWS_AS(Grid(15), std::invalid_argument);
  CHECK_THROWS_AS(Grid(8), std::invalid_argument);
  CHECK_NOTHROW(Grid(16));
  CHECK(Grid(64).h() * 64 == 1.0);
}

TEST_CASE("transforms") {
  const Grid g(32);

  SUBCASE("constant field has only the mean mode") {
    ScalarField one = ScalarField::sample(g, [](double, double) { return 1.0; });
    SpectralField hat = to_spectral(one);
    CHECK(std::abs(hat.at(0, 0) - 1.0) < 1e-14);
    double other = 0.0;
    for (auto c : hat.coefficients()) other += std::abs(c);
    CHECK(other - 1.0 < 1e-13);
  }

  SUBCASE("cos(2 pi x1) has coefficient 1/2 at (+-1, 0)") {
    ScalarField f = ScalarField::sample(g, [](double x, double) { return std::cos(2 * kPi * x); });
    SpectralField hat = to_spectral(f);
    CHECK(std::abs(hat.at(1, 0) - 0.5) < 1e-14);
    CHECK(std::abs(hat.at(-1, 0) - 0.5) < 1e-14);
    CHECK(std::abs(hat.at(0, 1)) < 1e-14);
    CHECK(std::abs(hat.at(1, 1)) < 1e-14);
  }

  SUBCASE("round trip of a random field") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> normal;
    ScalarField f(g);
    for (auto& v : f.values()) v = normal(rng);
    ScalarField back = from_spectral(to_spectral(f));
    CHECK(max_abs_diff(f, back) / f.max_abs() < 1e-12);
  }

  SUBCASE("set keeps the field real and add_real_mode synthesises cosines") {
    SpectralField hat(g);
    hat.add_real_mode(2, -3, {0.25, 0.0});
    ScalarField f = from_spectral(hat);
    ScalarField expect =
        ScalarField::sample(g, [](double x, double y) { return 0.5 * std::cos(2 * kPi * (2 * x - 3 * y)); });
    CHECK(max_abs_diff(f, expect) < 1e-13);
    SpectralField hat2(g);
    hat2.set(3, 0, {0.0, -0.5});
    CHECK(std::abs(hat2.at(-3, 0) - std::complex<double>(0.0, 0.5)) < 1e-15);
  }
}

TEST_CASE("biot_savart") {
  const Grid g(64);

  SUBCASE("zero vorticity gives zero velocity") {
    VectorField u = biot_savart(ScalarField(g));
    CHECK(u.max_norm() == 0.0);
  }

  SUBCASE("sin(2 pi x1) gives u = (0, -cos(2 pi x1) / (2 pi))") {
    ScalarField xi = ScalarField::sample(g, [](double x, double) { return std::sin(2 * kPi * x); });
    VectorField u = biot_savart(xi);
    ScalarField u2 = ScalarField::sample(g, [](double x, double) { return -std::cos(2 * kPi * x) / (2 * kPi); });
    CHECK(u.u1.max_abs() < 1e-15);
    CHECK(max_abs_diff(u.u2, u2) < 1e-15);
    CHECK(max_abs_diff(curl(u), xi) < 1e-12);
  }

  SUBCASE("curl round trip and divergence on band-limited fields") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      ScalarField xi = random_band_limited(g, 8, seed);
      VectorField u = biot_savart(xi);
      CHECK(max_abs_diff(curl(u), xi) <= 1e-10);
      CHECK(divergence(u).max_abs() <= 1e-10);
      SpectralField uh = to_spectral(u.u1);
      CHECK(std::abs(uh.at(0, 0)) < 1e-15);
    }
  }

  SUBCASE("rejects non-zero mean") {
    ScalarField xi = ScalarField::sample(g, [](double x, double) { return 0.1 + std::sin(2 * kPi * x); });
    CHECK_THROWS_AS(biot_savart(xi), std::invalid_argument);
  }

  SUBCASE("L2 bound with constant 1/(2 pi)") {
    // |u_hat(k)| = |xi_hat(k)| / (2 pi |k|); the ratio reaches 1/(2 pi) only for |k| = 1.
    ScalarField single = ScalarField::sample(g, [](double, double y) { return std::cos(2 * kPi * y); });
    CHECK(lp_norm(biot_savart(single), Norm::L2) / lp_norm(single, Norm::L2) ==
          doctest::Approx(1.0 / (2 * kPi)).epsilon(1e-12));
    for (std::uint64_t seed = 10; seed < 20; ++seed) {
      ScalarField xi = random_band_limited(g, 6, seed);
      CHECK(lp_norm(biot_savart(xi), Norm::L2) <= lp_norm(xi, Norm::L2) / (2 * kPi) * (1 + 1e-12));
    }
  }
}

TEST_CASE("differential operators") {
  const Grid g(64);
  SUBCASE("curl of (0, sin(2 pi x1))") {
    VectorField u(ScalarField(g), ScalarField::sample(g, [](double x, double) { return std::sin(2 * kPi * x); }));
    ScalarField expect = ScalarField::sample(g, [](double x, double) { return 2 * kPi * std::cos(2 * kPi * x); });
    CHECK(max_abs_diff(curl(u), expect) < 1e-11);
  }
  SUBCASE("gradient fields are curl free") {
    ScalarField f = random_band_limited(g, 7, 42);
    CHECK(curl(gradient(f)).max_abs() <= 1e-10);
  }
}

TEST_CASE("lp_norm") {
  const Grid g(64);
  ScalarField two = ScalarField::sample(g, [](double, double) { return 2.0; });
  CHECK(lp_norm(two, Norm::L1) == doctest::Approx(2.0));
  CHECK(lp_norm(two, Norm::LInf) == 2.0);
  ScalarField s = ScalarField::sample(g, [](double x, double) { return std::sin(2 * kPi * x); });
  CHECK(std::abs(lp_norm(s, Norm::L2) - 1.0 / std::sqrt(2.0)) <= g.h() * g.h());
  VectorField v(two, ScalarField(g));
  CHECK(lp_norm(v, Norm::L1) == doctest::Approx(2.0));
}

TEST_CASE("geodesic distance") {
  CHECK(geodesic_distance({0.3, 0.7}, {0.3, 0.7}) == 0.0);
  CHECK(geodesic_distance({0.0, 0.0}, {0.9, 0.0}) == doctest::Approx(0.1));
  CHECK(geodesic_distance({0.0, 0.0}, {0.5, 0.5}) == doctest::Approx(std::sqrt(2.0) / 2));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    TorusPoint a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)};
    const double ab = geodesic_distance(a, b);
    REQUIRE(ab == geodesic_distance(b, a));
    REQUIRE(ab <= std::sqrt(2.0) / 2 + 1e-15);
    REQUIRE(geodesic_distance(a, c) <= ab + geodesic_distance(b, c) + 1e-15);
  }
}

TEST_CASE("gamma modulus") {
  const double e = std::numbers::e;
  CHECK(gamma_modulus(0.0) == 0.0);
  CHECK(gamma_modulus(1.0 / e) == doctest::Approx(2.0 / e).epsilon(1e-15));
  // Left branch at the breakpoint gives the same value.
  CHECK((1.0 / e) * (1.0 - std::log(1.0 / e)) == doctest::Approx(2.0 / e).epsilon(1e-15));
  CHECK(gamma_modulus(1.0) == doctest::Approx(1.0 + 1.0 / e));
  CHECK_THROWS_AS(gamma_modulus(-1e-3), std::invalid_argument);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double r = u(rng), s = u(rng), t = u(rng);
    REQUIRE(gamma_modulus(t * r + (1 - t) * s) >= t * gamma_modulus(r) + (1 - t) * gamma_modulus(s) - 1e-12);
    REQUIRE(gamma_modulus(std::max(r, s)) >= gamma_modulus(std::min(r, s)));
  }
}

TEST_CASE("comparison ODE bound") {
  // While z < 1/e, log z solves a linear ODE: z_t = e^(1 - e^(-l t)) z0^(e^(-l t)).
  auto exact = [](double z0, double lambda, double t) {
    const double a = std::exp(-lambda * t);
    return std::exp(1.0 - a) * std::pow(z0, a);
  };

  SUBCASE("z0 = 0 stays at zero") {
    auto r = gamma_ode_bound_check(0.0, 1.0, 1.0, 100);
    CHECK(r.bound_satisfied);
    for (double z : r.trajectory) CHECK(z == 0.0);
  }
  SUBCASE("lambda = 1, T = 1, z0 = 1e-6") {
    auto r = gamma_ode_bound_check(1e-6, 1.0, 1.0, 1000);
    CHECK(r.bound_satisfied);
    CHECK(r.trajectory.back() == doctest::Approx(exact(1e-6, 1.0, 1.0)).epsilon(1e-8));
  }
  SUBCASE("admissibility boundary") {
    const double z0 = std::exp(1.0 - 2.0 * std::exp(1.0));
    auto r = gamma_ode_bound_check(z0, 2.0, 0.5, 1000);
    CHECK(r.bound_satisfied);
    CHECK(r.trajectory.back() == doctest::Approx(exact(z0, 2.0, 0.5)).epsilon(1e-8));
    CHECK(r.trajectory.back() <= 1.0 / std::numbers::e + 1e-12);
  }
  SUBCASE("rejects z0 outside the admissible range") {
    CHECK_THROWS_AS(gamma_ode_bound_check(0.5, 1.0, 1.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(gamma_ode_bound_check(-1e-9, 1.0, 1.0, 10), std::invalid_argument);
  }
  SUBCASE("random admissible triples") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
      const double lambda = 0.1 + 3.0 * u(rng);
      const double T = 0.1 + 1.5 * u(rng);
      const double z0 = u(rng) * gamma_ode_admissible_max(lambda, T);
      REQUIRE(gamma_ode_bound_check(z0, lambda, T, 400).bound_satisfied);
    }
  }
}

TEST_CASE("log-Lipschitz kernel estimate") {
  SUBCASE("zero offset") {
    auto r = log_lip_kernel_check(Grid(32), {{0, 0}});
    CHECK(r.pairs[0].integral == 0.0);
    CHECK(r.pairs[0].ratio == 0.0);
  }
  SUBCASE("constant is stable under refinement") {
    auto coarse = log_lip_kernel_check(60, Grid(64), 99, 64);
    auto fine = log_lip_kernel_check(60, Grid(128), 99, 64);
    CHECK(std::isfinite(coarse.max_ratio));
    CHECK(coarse.max_ratio > 0.0);
    CHECK(fine.max_ratio / coarse.max_ratio < 2.0);
    CHECK(coarse.max_ratio / fine.max_ratio < 2.0);
  }
  SUBCASE("large separations do not dominate") {
    const Grid g(64);
    auto small = log_lip_kernel_check(g, {{1, 0}, {0, 1}, {1, 1}, {2, 1}});
    auto large = log_lip_kernel_check(g, {{32, 0}, {0, 32}});
    CHECK(large.max_ratio <= small.max_ratio);
  }
}
