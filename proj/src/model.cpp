#include "ageinv/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ageinv/semigroup.hpp"

namespace ageinv {

ModelParams::ModelParams(AgeGrid grid, std::size_t n, double kappa,
                         std::vector<double> beta_cells,
                         std::vector<double> mu_cells, double a_dagger)
    : grid_(grid),
      n_(n),
      kappa_(kappa),
      beta_(std::move(beta_cells)),
      mu_(std::move(mu_cells)),
      a_dagger_(a_dagger) {
  if (n < 1) {
    throw std::invalid_argument("ModelParams: need at least one species");
  }
  if (!(kappa > 0.0)) {
    throw std::invalid_argument("ModelParams: kappa must be positive");
  }
  if (beta_.size() != grid.n_cells() || mu_.size() != grid.n_cells()) {
    throw std::invalid_argument("ModelParams: coefficient tables must have "
                                "one entry per grid cell");
  }
  for (std::size_t i = 0; i < grid.n_cells(); ++i) {
    if (beta_[i] < 0.0) {
      throw std::invalid_argument("ModelParams: beta must be nonnegative");
    }
    if (grid.cell_center(i) >= a_dagger_ && beta_[i] != 0.0) {
      throw std::invalid_argument(
          "ModelParams: beta must vanish beyond a_dagger");
    }
  }
  mu_inf_ = *std::min_element(mu_.begin(), mu_.end());
  mu_sup_ = *std::max_element(mu_.begin(), mu_.end());
  if (!(mu_inf_ > 0.0)) {
    throw std::invalid_argument(
        "ModelParams: mu must be bounded below by a positive constant");
  }
}

ModelParams ModelParams::from_profiles(
    AgeGrid grid, std::size_t n, double kappa,
    const std::function<double(double)>& beta,
    const std::function<double(double)>& mu, double a_dagger) {
  std::vector<double> beta_cells(grid.n_cells());
  std::vector<double> mu_cells(grid.n_cells());
  for (std::size_t i = 0; i < grid.n_cells(); ++i) {
    const double a = grid.cell_center(i);
    beta_cells[i] = a < a_dagger ? beta(a) : 0.0;
    mu_cells[i] = mu(a);
  }
  return ModelParams(grid, n, kappa, std::move(beta_cells),
                     std::move(mu_cells), a_dagger);
}

std::vector<double> F0(const GridFunction& phi, const ModelParams& params) {
  const double kappa = params.kappa();
  const double da = params.grid().cell_width();
  std::vector<double> out(params.n(), 0.0);
  for (std::size_t i = 0; i < phi.n_cells(); ++i) {
    const double b = params.beta()[i];
    if (b == 0.0) {
      continue;
    }
    const auto v = phi.cell(i);
    const double cap = chi(kappa - theta(v), kappa);
    for (std::size_t c = 0; c < out.size(); ++c) {
      out[c] += b * chi(v[c], kappa) * cap * da;
    }
  }
  return out;
}

GridFunction F1(const GridFunction& phi, const ModelParams& params) {
  const double kappa = params.kappa();
  GridFunction out(phi.grid(), phi.n_comp());
  for (std::size_t i = 0; i < phi.n_cells(); ++i) {
    const auto v = phi.cell(i);
    const double cap = chi(kappa - theta(v), kappa);
    const double mu = params.mu()[i];
    auto dst = out.cell(i);
    for (std::size_t c = 0; c < v.size(); ++c) {
      dst[c] = -mu * chi(v[c], kappa) * cap;
    }
  }
  return out;
}

GridFunction vhat(const GridFunction& phi, double h,
                  const ModelParams& params) {
  const std::vector<double> births = F0(phi, params);
  return apply_T0(phi, h) + apply_S(births, F1(phi, params), h);
}

GridFunction vhat1(const GridFunction& phi, double h,
                   const ModelParams& params) {
  const std::size_t m = phi.grid().cells_of(h);
  const std::vector<double> births = F0(phi, params);
  GridFunction out = apply_T0(phi, h) + h * apply_T0(F1(phi, params), h);
  for (std::size_t i = 0; i < std::min(m, phi.n_cells()); ++i) {
    auto dst = out.cell(i);
    std::copy(births.begin(), births.end(), dst.begin());
  }
  return out;
}

GridFunction vhat2(const GridFunction& phi, double h,
                   const ModelParams& params) {
  return vhat(phi, h, params) - vhat1(phi, h, params);
}

BetaCondition check_beta_condition(const ModelParams& params) {
  BetaCondition out;
  out.integral = 0.0;
  const double da = params.grid().cell_width();
  for (double b : params.beta()) {
    out.integral += b * da;
  }
  out.bound = 4.0 / params.kappa();
  out.margin = out.bound - out.integral;
  out.satisfied = out.integral <= out.bound;
  return out;
}

double h0_bound(const ModelParams& params) {
  if (!(params.mu_sup() > 0.0)) {
    throw std::invalid_argument("h0_bound: mu must not vanish identically");
  }
  return 1.0 / (params.mu_sup() * params.kappa());
}

double subtangency_defect(const GridFunction& phi, double h,
                          const ModelParams& params) {
  if (!(h > 0.0)) {
    throw std::invalid_argument("subtangency_defect: h must be positive");
  }
  if (dist_to_C(phi, params.kappa()) > 1e-12) {
    throw std::invalid_argument(
        "subtangency_defect: phi must lie in the invariant band C");
  }
  return dist_to_C(vhat(phi, h, params), params.kappa()) / h;
}

}  // namespace ageinv
