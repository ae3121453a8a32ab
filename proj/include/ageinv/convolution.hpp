#ifndef AGEINV_CONVOLUTION_HPP
#define AGEINV_CONVOLUTION_HPP

#include <vector>

#include "ageinv/grid.hpp"
#include "ageinv/semigroup.hpp"

namespace ageinv {

/// Piecewise-constant forcing in X on a grid-aligned time partition
/// t_0 < ... < t_m. The value on [t_i, t_{i+1}) is pieces[i]; the right
/// endpoint t_m carries the last piece.
class StepForcing {
public:
  StepForcing(std::vector<double> breakpoints, std::vector<StatePair> pieces);

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<StatePair>& pieces() const { return pieces_; }
  double t_begin() const { return breakpoints_.front(); }
  double t_end() const { return breakpoints_.back(); }

  /// Value at time t (left-continuous step convention).
  const StatePair& at(double t) const;

  /// Largest product-space norm over the pieces.
  double sup_norm() const;

  /// Restriction to [t, t_end] with the time origin moved to t, i.e. the
  /// forcing s -> f(t + s).
  StepForcing tail_from(double t) const;

private:
  std::vector<double> breakpoints_;
  std::vector<StatePair> pieces_;
};

/// (S_A diamond x 1_[a,b))(t) = S((t-a)^+)x - S((t-b)^+)x, the derivative of
/// the convolution of S against an indicator forcing. gamma selects the
/// scalar-shift perturbed family.
GridFunction s_diamond_indicator(const StatePair& x, double a, double b,
                                 double t, double gamma = 0.0);

/// Telescoping-sum evaluation of (S_A diamond f)(t) for a step forcing,
/// t within the forcing's span.
GridFunction s_diamond_step(const StepForcing& f, double t,
                            double gamma = 0.0);

/// Regulated-forcing bound probe: compares the realized norm against the
/// empirical delta estimate times the forcing's sup norm.
struct BoundCheck {
  double lhs;      // || (S diamond f)(t) ||
  double rhs;      // delta(t - t0) * sup ||f||
  bool satisfied;  // lhs <= rhs * (1 + 1e-9)
};

BoundCheck s_diamond_bound_check(const StepForcing& f, double t,
                                 DeltaEstimator& delta);

/// Defect of the cocycle identity
/// (S diamond f)(t+s) = T(s)(S diamond f)(t) + (S diamond f(t+.))(s);
/// exact up to rounding on the grid-aligned lattice.
double cocycle_check(const StepForcing& f, double t, double s);

}  // namespace ageinv

#endif
