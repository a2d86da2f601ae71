#pragma once

#include <cstdint>
#include <string>

#include "wz/torus/field.hpp"

namespace wz {

enum class InitialCondition {
  TwoModeShear,       ///< sin(2 pi x1) + cos(4 pi x2) / 2
  RandomBandLimited,  ///< random modes with |k|_inf <= 4, scaled to max |xi0| = 1
  SmoothedPatch,      ///< smoothed disc of radius 0.2 at the centre, minus its mean
  SteadyShear,        ///< sin(2 pi x1), a stationary Euler solution
};

InitialCondition parse_initial_condition(const std::string& name);
std::string to_string(InitialCondition ic);

/// Zero-mean initial vorticity on the grid; `seed` only affects RandomBandLimited.
ScalarField initial_vorticity(InitialCondition ic, Grid grid, std::uint64_t seed = 0);

}  // namespace wz
