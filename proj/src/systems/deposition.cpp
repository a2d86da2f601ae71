#include "wz/systems/deposition.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace wz {

ScalarField deposit(const FlowMap& fm, std::span<const double> values, Grid grid, DepositionStats* stats) {
  if (values.size() != fm.size()) throw std::invalid_argument("deposit: one value per label is required");
  const int n = grid.n();
  std::vector<double> mass(grid.size(), 0.0), weight(grid.size(), 0.0);
  for (std::size_t k = 0; k < fm.size(); ++k) {
    const double sx = fm[k].x * n, sy = fm[k].y * n;
    const int i0 = static_cast<int>(std::floor(sx)), j0 = static_cast<int>(std::floor(sy));
    const double tx = sx - i0, ty = sy - j0;
    const int i1 = (i0 + 1) % n, j1 = (j0 + 1) % n;
    const int ia = i0 % n, ja = j0 % n;
    const double w[4] = {(1 - tx) * (1 - ty), (1 - tx) * ty, tx * (1 - ty), tx * ty};
    const std::size_t idx[4] = {grid.index(ia, ja), grid.index(ia, j1), grid.index(i1, ja), grid.index(i1, j1)};
    for (int c = 0; c < 4; ++c) {
      mass[idx[c]] += w[c] * values[k];
      weight[idx[c]] += w[c];
    }
  }

  ScalarField out(grid);
  std::vector<char> filled(grid.size(), 0);
  // Weights below this are rounding residue from particles sitting on a node line.
  constexpr double kTiny = 1e-12;
  int empty = 0;
  double min_weight = INFINITY;
  for (std::size_t m = 0; m < grid.size(); ++m) {
    if (weight[m] > kTiny) {
      out[m] = mass[m] / weight[m];
      filled[m] = 1;
      min_weight = std::min(min_weight, weight[m]);
    } else {
      ++empty;
    }
  }
  int remaining = empty;
  while (remaining > 0) {
    std::vector<std::size_t> newly;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const std::size_t m = grid.index(i, j);
        if (filled[m]) continue;
        double s = 0.0;
        int c = 0;
        const std::size_t nb[4] = {grid.index((i + 1) % n, j), grid.index((i + n - 1) % n, j),
                                   grid.index(i, (j + 1) % n), grid.index(i, (j + n - 1) % n)};
        for (std::size_t q : nb)
          if (filled[q] == 1) {
            s += out[q];
            ++c;
          }
        if (c > 0) {
          out[m] = s / c;
          newly.push_back(m);
        }
      }
    if (newly.empty()) break;  // no particles at all
    for (std::size_t m : newly) filled[m] = 1;
    remaining -= static_cast<int>(newly.size());
  }
  if (stats) {
    stats->empty_nodes = empty;
    stats->min_weight = std::isfinite(min_weight) ? min_weight : 0.0;
  }
  return out;
}

}  // namespace wz
