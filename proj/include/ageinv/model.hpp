#ifndef AGEINV_MODEL_HPP
#define AGEINV_MODEL_HPP

#include <functional>
#include <vector>

#include "ageinv/grid.hpp"

namespace ageinv {

/// Data of the age-structured model: carrying threshold kappa, birth rate
/// beta supported on [0, a_dagger), mortality mu bounded below by a positive
/// constant, n species sharing the total-density cap.
class ModelParams {
public:
  ModelParams(AgeGrid grid, std::size_t n, double kappa,
              std::vector<double> beta_cells, std::vector<double> mu_cells,
              double a_dagger);

  /// Samples analytic profiles at cell midpoints.
  static ModelParams from_profiles(AgeGrid grid, std::size_t n, double kappa,
                                   const std::function<double(double)>& beta,
                                   const std::function<double(double)>& mu,
                                   double a_dagger);

  const AgeGrid& grid() const { return grid_; }
  std::size_t n() const { return n_; }
  double kappa() const { return kappa_; }
  double a_dagger() const { return a_dagger_; }
  const std::vector<double>& beta() const { return beta_; }
  const std::vector<double>& mu() const { return mu_; }
  double mu_inf() const { return mu_inf_; }  // ess-inf of mu
  double mu_sup() const { return mu_sup_; }

private:
  AgeGrid grid_;
  std::size_t n_;
  double kappa_;
  std::vector<double> beta_;
  std::vector<double> mu_;
  double a_dagger_;
  double mu_inf_;
  double mu_sup_;
};

/// Birth integral: F0(phi)_i = int beta(a) chi(phi_i) chi(kappa - theta(phi)) da,
/// evaluated with the cell rule (exact for piecewise-constant data).
std::vector<double> F0(const GridFunction& phi, const ModelParams& params);

/// Truncated mortality: F1(phi)_i(a) = -mu(a) chi(phi_i) chi(kappa - theta(phi)).
GridFunction F1(const GridFunction& phi, const ModelParams& params);

/// One-step semigroup Euler predictor: T(h) phi + S(h)(F0(phi), F1(phi)).
GridFunction vhat(const GridFunction& phi, double h, const ModelParams& params);

/// The invariance-carrying part of the predictor: transported density plus
/// h times transported mortality on ages >= h, birth output below h.
GridFunction vhat1(const GridFunction& phi, double h,
                   const ModelParams& params);

/// Remainder vhat - vhat1; its norm is o(h) on C.
GridFunction vhat2(const GridFunction& phi, double h,
                   const ModelParams& params);

/// Smallness of the birth kernel: int_0^a_dagger beta <= 4 / kappa.
struct BetaCondition {
  bool satisfied;
  double integral;
  double bound;   // 4 / kappa
  double margin;  // bound - integral
};

BetaCondition check_beta_condition(const ModelParams& params);

/// Certified step bound h0 = 1 / (||mu||_inf * kappa): below it the map
/// s -> (1 - h mu (kappa - s)) s is nondecreasing on [0, kappa], which keeps
/// the transported part of the predictor inside the band.
double h0_bound(const ModelParams& params);

/// (1/h) * dist_to_C(vhat(phi, h)); phi must lie in C.
double subtangency_defect(const GridFunction& phi, double h,
                          const ModelParams& params);

}  // namespace ageinv

#endif
