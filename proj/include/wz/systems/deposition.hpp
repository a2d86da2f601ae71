#pragma once

#include <span>

#include "wz/lagrangian/flow.hpp"

namespace wz {

/// Area-weighted (bilinear) particle-to-grid transfer. Each node receives the
/// weighted average of the particle values in its four surrounding cells, so a
/// constant particle field deposits to the same constant and the deposit stays
/// inside the particle range. Nodes reached by no particle take the average of
/// their filled neighbours.
struct DepositionStats {
  int empty_nodes = 0;
  double min_weight = 0.0;  ///< smallest accumulated weight over filled nodes, in cell areas
};

ScalarField deposit(const FlowMap& fm, std::span<const double> values, Grid grid, DepositionStats* stats = nullptr);

}  // namespace wz
