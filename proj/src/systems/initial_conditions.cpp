#include "wz/systems/initial_conditions.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "wz/stochastic/noise_driver.hpp"

namespace wz {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::uint64_t kInitialSalt = 0x1c0d'5eed;

ScalarField random_band_limited(Grid grid, std::uint64_t seed) {
  std::mt19937_64 rng(stream_seed(seed, 0, 0, kInitialSalt));
  std::normal_distribution<double> normal;
  struct Mode {
    int k1, k2;
    double a, b;
  };
  std::vector<Mode> modes;
  for (int k1 = 0; k1 <= 4; ++k1)
    for (int k2 = -4; k2 <= 4; ++k2) {
      if (k1 == 0 && k2 <= 0) continue;
      const double a = normal(rng), b = normal(rng);
      modes.push_back({k1, k2, a, b});
    }
  ScalarField f = ScalarField::sample(grid, [&](double x, double y) {
    double v = 0.0;
    for (const auto& m : modes) {
      const double ph = kTwoPi * (m.k1 * x + m.k2 * y);
      v += m.a * std::cos(ph) + m.b * std::sin(ph);
    }
    return v;
  });
  f.remove_mean();
  f *= 1.0 / f.max_abs();
  return f;
}

}  // namespace

InitialCondition parse_initial_condition(const std::string& name) {
  if (name == "shear" || name == "a") return InitialCondition::TwoModeShear;
  if (name == "random" || name == "b") return InitialCondition::RandomBandLimited;
  if (name == "patch" || name == "c") return InitialCondition::SmoothedPatch;
  if (name == "steady") return InitialCondition::SteadyShear;
  throw std::invalid_argument("unknown initial condition: " + name);
}

std::string to_string(InitialCondition ic) {
  switch (ic) {
    case InitialCondition::TwoModeShear: return "shear";
    case InitialCondition::RandomBandLimited: return "random";
    case InitialCondition::SmoothedPatch: return "patch";
    case InitialCondition::SteadyShear: return "steady";
  }
  return "unknown";
}

ScalarField initial_vorticity(InitialCondition ic, Grid grid, std::uint64_t seed) {
  ScalarField f(grid);
  switch (ic) {
    case InitialCondition::TwoModeShear:
      f = ScalarField::sample(grid, [](double x, double y) { return std::sin(kTwoPi * x) + 0.5 * std::cos(2 * kTwoPi * y); });
      break;
    case InitialCondition::RandomBandLimited:
      f = random_band_limited(grid, seed);
      break;
    case InitialCondition::SmoothedPatch:
      f = ScalarField::sample(grid, [](double x, double y) {
        const double r = std::hypot(minimal_image(x - 0.5), minimal_image(y - 0.5));
        return 0.5 * (1.0 - std::tanh((r - 0.2) / 0.04));
      });
      f.remove_mean();
      break;
    case InitialCondition::SteadyShear:
      f = ScalarField::sample(grid, [](double x, double) { return std::sin(kTwoPi * x); });
      break;
  }
  // Sampled trigonometric sums carry rounding-level means.
  if (std::abs(f.mean()) > 1e-12) throw std::logic_error("initial vorticity is not zero-mean");
  f.remove_mean();
  return f;
}

}  // namespace wz
