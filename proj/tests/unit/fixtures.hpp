#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "bdlab/fields.hpp"
#include "bdlab/grid.hpp"
#include "bdlab/symtensor.hpp"

namespace bdlab::test {

/// u = 1_{x2>0} e1 + 1_{x1>0} e2 on (lo, hi)^2 with lo < 0 < hi.
inline DisplacementField staircase(int n, double lo = -1.0, double hi = 1.0) {
  const Grid g = Grid::cube(2, lo, hi, n);
  std::vector<JumpInterface> jumps{JumpInterface::polyline({{hi, 0.0}, {lo, 0.0}}, {1.0, 0.0}),
                                   JumpInterface::polyline({{0.0, lo}, {0.0, hi}}, {0.0, 1.0})};
  return sample_field(
      g, [](std::span<const double> x) { return Vec{x[1] > 0 ? 1.0 : 0.0, x[0] > 0 ? 1.0 : 0.0}; }, jumps);
}

inline SymMatrix random_sym(std::mt19937_64& rng, int d = 2, double scale = 1.0) {
  std::normal_distribution<double> N(0.0, scale);
  SymMatrix m(d);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) m(i, j) = N(rng);
  return m;
}

inline SymMatrix e12() { return sym_dyad(Vec{1.0, 0.0}, Vec{0.0, 1.0}); }

inline double observed_order(double coarse, double fine) { return std::log2(coarse / fine); }

}  // namespace bdlab::test
