// A planar cloud stretched along x with a few large outliers along y.
// L2-PCA swings towards the outliers, L1 and the g_1 crossover much less.

#include <cmath>
#include <iostream>
#include <random>

#include "gpca/gpca.hpp"

int main() {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  gpca::Matrix raw(60, 2);
  for (int i = 0; i < 55; ++i) raw.row(i) << 3.0 * normal(rng), 0.5 * normal(rng);
  for (int i = 55; i < 60; ++i) raw.row(i) << 0.0, 12.0 + normal(rng);

  const gpca::DataMatrix data = gpca::center(raw);
  for (const char* name : {"lp:2", "lp:1", "crossover:1", "zeta1"}) {
    const auto spec = gpca::ObjectiveSpec::parse(name);
    const auto basis = gpca::fit(data, spec, 1);
    const auto w = basis.vector(0);
    std::cout << name << ": w = (" << w[0] << ", " << w[1] << "), angle "
              << std::atan2(w[1], w[0]) * 180.0 / 3.14159265358979 << " deg, "
              << basis.diagnostics[0].iterations << " iterations\n";
  }
}
