#ifndef TESTS_HELPERS_HPP
#define TESTS_HELPERS_HPP

#include <algorithm>
#include <vector>

#include "ageinv/convolution.hpp"
#include "ageinv/grid.hpp"
#include "ageinv/model.hpp"
#include "ageinv/rng.hpp"
#include "ageinv/semigroup.hpp"

namespace testutil {

using namespace ageinv;

// The coarse reference configuration used throughout the suite.
inline AgeGrid default_grid() { return AgeGrid(0.01, 1000, 2.0); }

inline ModelParams default_params() {
  return ModelParams::from_profiles(
      default_grid(), 1, 1.0, [](double a) { return a < 2.0 ? 1.5 : 0.0; },
      [](double) { return 0.5; }, 2.0);
}

inline GridFunction from_values(const AgeGrid& grid,
                                const std::vector<double>& v) {
  GridFunction f(grid, 1);
  for (std::size_t i = 0; i < v.size(); ++i) {
    f(i, 0) = v[i];
  }
  return f;
}

inline GridFunction random_function(const AgeGrid& grid, std::size_t n_comp,
                                    Rng& rng, double lo = -1.0,
                                    double hi = 1.0) {
  GridFunction f(grid, n_comp);
  for (double& v : f.values()) {
    v = rng.uniform(lo, hi);
  }
  return f;
}

// Random grid-aligned step forcing over [0, horizon] with unit-bounded
// piece norms, mixing boundary and density content.
inline StepForcing random_forcing(const AgeGrid& grid, std::size_t n_comp,
                                  double horizon, Rng& rng) {
  const std::size_t total = grid.cells_of(horizon);
  const std::size_t q = 1 + rng.below(4);
  std::vector<std::size_t> cells{0, total};
  while (cells.size() < q + 1) {
    cells.push_back(1 + rng.below(total - 1));
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  }
  std::vector<double> breaks;
  for (std::size_t c : cells) {
    breaks.push_back(static_cast<double>(c) * grid.cell_width());
  }
  std::vector<StatePair> pieces;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    StatePair x = StatePair::zero(grid, n_comp);
    const double weight = rng.uniform();
    for (double& b : x.boundary) {
      b = rng.uniform(-1.0, 1.0);
    }
    const double bn = vector_lp_norm(x.boundary, grid.p());
    if (bn > 0.0) {
      for (double& b : x.boundary) {
        b *= weight / bn;
      }
    }
    for (double& v : x.density.values()) {
      v = rng.uniform(-1.0, 1.0);
    }
    const double dn = lp_norm(x.density);
    if (dn > 0.0) {
      x.density *= (1.0 - weight) / dn;
    }
    pieces.push_back(std::move(x));
  }
  return StepForcing(std::move(breaks), std::move(pieces));
}

// Brute-force convolution oracle: left-endpoint Riemann sum of
// (S * f)(t) = int_0^t S(t - s) f(s) ds on the cell lattice.
inline GridFunction riemann_s_star(const StepForcing& f, double t,
                                   const AgeGrid& grid, std::size_t n_comp) {
  const double da = grid.cell_width();
  const std::size_t m = grid.cells_of(t - f.t_begin());
  GridFunction acc(grid, n_comp);
  for (std::size_t j = 0; j < m; ++j) {
    const double s = f.t_begin() + static_cast<double>(j) * da;
    const StatePair& piece = f.at(s);
    GridFunction term = apply_S(piece.boundary, piece.density, t - s);
    term *= da;
    acc += term;
  }
  return acc;
}

// Backward difference of the Riemann sum: the independent evaluation of
// (S diamond f)(t) that the closed formulas are checked against.
inline GridFunction oracle_s_diamond(const StepForcing& f, double t,
                                     const AgeGrid& grid,
                                     std::size_t n_comp) {
  const double da = grid.cell_width();
  GridFunction hi = riemann_s_star(f, t, grid, n_comp);
  hi -= riemann_s_star(f, t - da, grid, n_comp);
  hi *= 1.0 / da;
  return hi;
}

}  // namespace testutil

#endif
