#ifndef AGEINV_ORACLES_HPP
#define AGEINV_ORACLES_HPP

#include <vector>

#include "ageinv/grid.hpp"
#include "ageinv/model.hpp"

namespace ageinv {

struct OracleSolution {
  std::vector<double> times;
  std::vector<GridFunction> states;
};

struct PicardResult {
  OracleSolution solution;
  /// Sup-over-lattice differences between successive Picard iterates,
  /// per window in order.
  std::vector<double> iterate_diffs;
  bool converged = false;
};

/// Fixed-point iteration on the mild formulation
/// u(t) = T(t) x0 + (S diamond F(u))(t) over the cell-width time lattice,
/// windowed so that each window stays in the contraction regime. Throws on
/// sustained non-contraction.
PicardResult picard_solve(const GridFunction& x0, double tau,
                          std::size_t iters, const ModelParams& params,
                          double window = 0.25, double tol = 1e-10);

/// Method-of-characteristics reference: unit-CFL transport (one cell per
/// step), one classical four-stage explicit step of the mortality ODE per
/// cell, renewal quadrature for the boundary cell. Independent of the
/// semigroup and convolution modules.
OracleSolution characteristics_solve(const GridFunction& x0, double tau,
                                     const ModelParams& params);

}  // namespace ageinv

#endif
