#ifndef AGEINV_SCHEME_HPP
#define AGEINV_SCHEME_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ageinv/grid.hpp"
#include "ageinv/model.hpp"
#include "ageinv/rng.hpp"
#include "ageinv/semigroup.hpp"

namespace ageinv {

struct SchemeConfig {
  double epsilon = 0.1;   // accuracy parameter, in (0,1)
  double tau = 1.0;       // horizon
  double gamma = 0.0;     // scalar perturbation
  double rho = 0.0;       // working radius; <= 0 selects 2 (||x0|| + 1)
  double eta_min = 0.0;   // smallest trial step; <= 0 selects one cell width
  std::size_t max_knots = 100000;
  std::uint64_t seed = 1;
};

/// One node of the knot construction. H and eta describe the step leaving
/// this knot towards the next one (zero on the final knot).
struct Knot {
  double l;
  GridFunction y;
  GridFunction H;
  double eta = 0.0;
};

enum class Termination { horizon, knot_cap, divergence, step_collapse };

const char* to_string(Termination t);

/// Run-level measured constants and the a-posteriori smallness certificate.
struct RunStats {
  double lambda_hat = 0.0;  // largest observed Lipschitz quotient of F_gamma
  double gamma_hat = 0.0;   // largest ||F_gamma|| along the run
  double delta_eps = 0.0;   // empirical delta at the accuracy parameter
  double delta_tau = 0.0;   // empirical delta at the horizon
  double rho = 0.0;         // working radius actually used
  bool paper_regime = false;
  bool beta_condition = true;
};

struct Trajectory {
  std::vector<Knot> knots;
  std::vector<double> sample_times;
  std::vector<GridFunction> samples;
  std::vector<double> sample_defects;  // dist_to_C per sample
  Termination terminated_by = Termination::horizon;
  RunStats stats;
};

/// Raised when no admissible trial step of at least eta_min exists.
class step_collapse_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Model nonlinearity with the scalar-shift compensation:
/// F_gamma(y) = (F0(y), F1(y) + gamma y).
StatePair force_gamma(const GridFunction& y, double gamma,
                      const ModelParams& params);

/// Semigroup Euler predictor T_gamma(h) y + S_gamma(h) F_gamma(y).
GridFunction predictor(const GridFunction& y, double h, double gamma,
                       const ModelParams& params);

/// Halving search for the largest grid-aligned step eta <= min(epsilon, rho)
/// satisfying the three membership conditions (F-continuity under finite
/// probing, sub-tangency defect below epsilon/2, transport displacement
/// below epsilon). At the one-cell resolution floor the conditions are no
/// longer representable on the grid and the step is accepted on the strength
/// of the continuum small-step guarantee (statistics still recorded). Throws
/// step_collapse_error when eta_min exceeds the floor and nothing survives.
/// Updates the Lipschitz record in stats when provided.
double trial_step(double l, const GridFunction& y, const SchemeConfig& cfg,
                  const ModelParams& params, Rng& rng,
                  RunStats* stats = nullptr);

/// Advances by h = eta/2 (grid-floored, capped at h_cap): predictor, then
/// projection back onto C; fills k's outgoing correction H = (y' - z)/h and
/// re-checks ||H|| <= epsilon/2, halving the step if the projection defect
/// is too large. Returns the next knot.
Knot advance_knot(Knot& k, double eta, const SchemeConfig& cfg,
                  const ModelParams& params, double h_cap);

/// Full knot sequence from x0 at l=0 to the horizon, with samples of the
/// assembled approximate solution on the cell-width time lattice.
Trajectory build_knots(const GridFunction& x0, const SchemeConfig& cfg,
                       const ModelParams& params);

/// Piecewise evaluation of the approximate solution between knots:
/// u(t) = T_gamma(t - l_k) y_k + S_gamma(t - l_k) F_gamma(y_k) + (t - l_k) H_k.
GridFunction assemble_u_eps(const std::vector<Knot>& knots, double t,
                            const SchemeConfig& cfg,
                            const ModelParams& params);

struct ConvergenceResult {
  std::vector<double> epsilons;
  std::vector<Trajectory> levels;
  std::vector<double> cauchy;  // sup_t distance between consecutive levels
};

/// Runs the construction at epsilon / 2^j for j = 0..levels-1 and tabulates
/// the sup-over-time differences between consecutive levels.
ConvergenceResult converge_run(const GridFunction& x0,
                               const SchemeConfig& cfg,
                               const ModelParams& params, std::size_t levels);

}  // namespace ageinv

#endif
