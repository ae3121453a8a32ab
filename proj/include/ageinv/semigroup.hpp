#ifndef AGEINV_SEMIGROUP_HPP
#define AGEINV_SEMIGROUP_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "ageinv/grid.hpp"
#include "ageinv/rng.hpp"

namespace ageinv {

/// Transport semigroup action on the density component: shift by t towards
/// older ages with zero inflow. t must be grid-aligned.
GridFunction apply_T0(const GridFunction& f, double t);

/// Scalar-shift perturbed transport: e^(-gamma t) times apply_T0.
GridFunction apply_T0_shifted(const GridFunction& f, double t, double gamma);

/// Integrated-semigroup action on a state (x, f): boundary block carrying x
/// on ages below t plus the running transport integral of f (left-endpoint
/// rule, exact for piecewise-constant cells). S(0) = 0.
GridFunction apply_S(std::span<const double> x, const GridFunction& f,
                     double t);

/// Integrated semigroup of the scalar-shift perturbed generator: the inflow
/// x decays over the age it has travelled and the integrand picks up
/// e^(-gamma l) at the left endpoints. Reduces to apply_S for gamma = 0.
GridFunction apply_S_shifted(std::span<const double> x, const GridFunction& f,
                             double t, double gamma);

/// Empirical bound delta(t) on the step-response gain of the integrated
/// semigroup, estimated as the maximum semi-variation of S over random
/// grid-aligned partitions with unit-norm values. Estimates are cached on
/// the cell lattice and made nondecreasing by cumulative maximum.
class DeltaEstimator {
public:
  DeltaEstimator(AgeGrid grid, std::size_t n_comp, std::size_t trials,
                 std::uint64_t seed);

  /// delta(t) for grid-aligned t; extends the cached table on demand.
  double delta(double t);

  std::size_t trials() const { return trials_; }

private:
  void extend(std::size_t steps);

  AgeGrid grid_;
  std::size_t n_comp_;
  std::size_t trials_;
  std::uint64_t seed_;
  std::vector<double> table_;  // table_[m] = delta(m * cell_width)
};

/// One-shot estimate of delta(t); convenience wrapper over DeltaEstimator.
double estimate_delta(const AgeGrid& grid, std::size_t n_comp, double t,
                      std::size_t trials, std::uint64_t seed = 2026);

}  // namespace ageinv

#endif
