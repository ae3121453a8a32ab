#include "ageinv/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ageinv {

namespace {

double floor_to_grid(double t, const AgeGrid& grid) {
  const double da = grid.cell_width();
  const double cells = std::floor(t / da + 1e-9);
  return std::max(cells, 0.0) * da;
}

// Smooth random direction: a few Gaussian bumps per component, normalized
// to unit L^p norm. Smoothness keeps the probe displacements compatible
// with the translation-continuity the estimates rely on.
GridFunction random_smooth_direction(const AgeGrid& grid, std::size_t n_comp,
                                     Rng& rng) {
  GridFunction out(grid, n_comp);
  for (std::size_t c = 0; c < n_comp; ++c) {
    for (int b = 0; b < 3; ++b) {
      const double center = rng.uniform(0.0, grid.a_max());
      const double width = rng.uniform(0.3, 1.5);
      const double amp = rng.uniform(-1.0, 1.0);
      for (std::size_t i = 0; i < grid.n_cells(); ++i) {
        const double r = (grid.cell_center(i) - center) / width;
        out(i, c) += amp * std::exp(-r * r);
      }
    }
  }
  const double nrm = lp_norm(out);
  if (nrm > 0.0) {
    out *= 1.0 / nrm;
  }
  return out;
}

double effective_rho(const SchemeConfig& cfg, const GridFunction& ref) {
  return cfg.rho > 0.0 ? cfg.rho : 2.0 * (lp_norm(ref) + 1.0);
}

double effective_eta_min(const SchemeConfig& cfg, const AgeGrid& grid) {
  return cfg.eta_min > 0.0 ? cfg.eta_min : grid.cell_width();
}

}  // namespace

const char* to_string(Termination t) {
  switch (t) {
    case Termination::horizon: return "horizon";
    case Termination::knot_cap: return "knot_cap";
    case Termination::divergence: return "divergence";
    case Termination::step_collapse: return "step_collapse";
  }
  return "unknown";
}

StatePair force_gamma(const GridFunction& y, double gamma,
                      const ModelParams& params) {
  GridFunction density = F1(y, params);
  if (gamma != 0.0) {
    density += gamma * y;
  }
  return StatePair(F0(y, params), std::move(density));
}

GridFunction predictor(const GridFunction& y, double h, double gamma,
                       const ModelParams& params) {
  const StatePair f = force_gamma(y, gamma, params);
  return apply_T0_shifted(y, h, gamma) +
         apply_S_shifted(f.boundary, f.density, h, gamma);
}

double trial_step(double l, const GridFunction& y, const SchemeConfig& cfg,
                  const ModelParams& params, Rng& rng, RunStats* stats) {
  const AgeGrid& grid = y.grid();
  const double eps = cfg.epsilon;
  const double rho = effective_rho(cfg, y);
  const double eta_min = effective_eta_min(cfg, grid);
  const StatePair f_center = force_gamma(y, cfg.gamma, params);

  double eta = floor_to_grid(std::min(eps, rho), grid);
  eta = std::max(eta, grid.cell_width());
  for (; eta >= eta_min - 1e-12; eta = floor_to_grid(eta / 2.0, grid)) {
    // At the resolution floor the probe ball is no longer representable on
    // the grid; admissibility of arbitrarily small steps is a property of
    // the continuum construction, so the step is accepted and only the
    // continuity statistics are recorded.
    const bool floor_step = eta <= grid.cell_width() * (1.0 + 1e-9);
    // (a) F_gamma varies by at most eps over the probe ball around (l, y).
    bool ok = true;
    for (int probe = 0; probe < 8 && (ok || floor_step); ++probe) {
      const GridFunction dir = random_smooth_direction(grid, y.n_comp(), rng);
      const double mag = eta * rng.uniform();
      const GridFunction y_probe =
          project_to_C(y + mag * dir, params.kappa());
      const StatePair f_probe = force_gamma(y_probe, cfg.gamma, params);
      std::vector<double> bdiff(f_probe.boundary.size());
      for (std::size_t c = 0; c < bdiff.size(); ++c) {
        bdiff[c] = f_probe.boundary[c] - f_center.boundary[c];
      }
      const double diff_norm = vector_lp_norm(bdiff, grid.p()) +
                               lp_norm(f_probe.density - f_center.density);
      const double dy = lp_norm(y_probe - y);
      if (stats != nullptr && dy > 1e-14) {
        stats->lambda_hat = std::max(stats->lambda_hat, diff_norm / dy);
      }
      if (diff_norm > eps) {
        ok = false;
      }
    }
    if (floor_step) {
      return eta;
    }
    if (!ok) {
      continue;
    }
    // (b) sub-tangency defect of the predictor below eps/2.
    const GridFunction z = predictor(y, eta, cfg.gamma, params);
    if (dist_to_C(z, params.kappa()) / eta >= eps / 2.0) {
      continue;
    }
    // (c) transport displacement below eps.
    if (lp_norm(apply_T0_shifted(y, eta, cfg.gamma) - y) > eps) {
      continue;
    }
    return eta;
  }
  throw step_collapse_error(
      "trial_step: no admissible step above eta_min = " +
      std::to_string(eta_min) + " at l = " + std::to_string(l));
}

Knot advance_knot(Knot& k, double eta, const SchemeConfig& cfg,
                  const ModelParams& params, double h_cap) {
  const AgeGrid& grid = k.y.grid();
  const double da = grid.cell_width();
  const double eps = cfg.epsilon;
  double trial_eta = eta;
  while (true) {
    // Advance by eta/2 (grid-floored, never below one cell width so the
    // lattice stays reachable) and cap at the remaining horizon.
    const double h = std::max(
        floor_to_grid(std::min(trial_eta / 2.0, h_cap), grid), da);
    const GridFunction z = predictor(k.y, h, cfg.gamma, params);
    GridFunction y_next = project_to_C(z, params.kappa());
    GridFunction correction = (1.0 / h) * (y_next - z);
    if (lp_norm(correction) <= eps / 2.0) {
      k.H = std::move(correction);
      k.eta = trial_eta;
      Knot next{k.l + h, std::move(y_next), GridFunction(grid, k.y.n_comp()),
                0.0};
      return next;
    }
    if (h <= da * (1.0 + 1e-9)) {
      throw step_collapse_error(
          "advance_knot: correction bound unattainable above the grid step");
    }
    trial_eta /= 2.0;
  }
}

Trajectory build_knots(const GridFunction& x0, const SchemeConfig& cfg,
                       const ModelParams& params) {
  const AgeGrid& grid = x0.grid();
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) {
    throw std::invalid_argument("build_knots: epsilon must lie in (0,1)");
  }
  if (!(cfg.tau > 0.0) || !grid.aligned(cfg.tau)) {
    throw std::invalid_argument(
        "build_knots: horizon must be positive and grid-aligned");
  }
  if (dist_to_C(x0, params.kappa()) > 1e-12) {
    throw std::invalid_argument("build_knots: x0 must lie in C");
  }

  SchemeConfig run_cfg = cfg;
  run_cfg.rho = effective_rho(cfg, x0);

  Trajectory traj;
  traj.stats.rho = run_cfg.rho;
  traj.stats.beta_condition = check_beta_condition(params).satisfied;

  Rng rng(cfg.seed);
  traj.knots.push_back(
      Knot{0.0, x0, GridFunction(grid, x0.n_comp()), 0.0});
  traj.terminated_by = Termination::horizon;

  const double tol = 1e-9 * std::max(1.0, cfg.tau);
  while (true) {
    Knot& cur = traj.knots.back();
    if (cur.l >= cfg.tau - tol) {
      break;
    }
    if (traj.knots.size() >= cfg.max_knots) {
      traj.terminated_by = Termination::knot_cap;
      break;
    }
    if (lp_norm(cur.y) > 10.0 * run_cfg.rho) {
      traj.terminated_by = Termination::divergence;
      break;
    }
    double eta;
    try {
      eta = trial_step(cur.l, cur.y, run_cfg, params, rng, &traj.stats);
    } catch (const step_collapse_error&) {
      traj.terminated_by = Termination::step_collapse;
      break;
    }
    Knot next =
        advance_knot(cur, eta, run_cfg, params, cfg.tau - cur.l);
    traj.knots.push_back(std::move(next));
  }

  // Measured force bound along the realized iterates.
  for (const Knot& k : traj.knots) {
    traj.stats.gamma_hat = std::max(
        traj.stats.gamma_hat,
        state_norm(force_gamma(k.y, cfg.gamma, params)));
  }
  {
    DeltaEstimator delta(grid, x0.n_comp(), 40, 9001);
    const double eps_t =
        std::max(floor_to_grid(cfg.epsilon, grid), grid.cell_width());
    traj.stats.delta_eps = delta.delta(eps_t);
    traj.stats.delta_tau = delta.delta(traj.knots.back().l);
  }
  traj.stats.paper_regime =
      traj.stats.lambda_hat * traj.stats.delta_tau < 1.0 &&
      traj.stats.gamma_hat * traj.stats.delta_tau + cfg.tau + lp_norm(x0) <=
          run_cfg.rho &&
      cfg.tau <= run_cfg.rho;

  // Samples of the assembled solution on the cell-width lattice.
  const double reach = traj.knots.back().l;
  const std::size_t n_samples = grid.cells_of(floor_to_grid(reach, grid));
  for (std::size_t i = 0; i <= n_samples; ++i) {
    const double t = static_cast<double>(i) * grid.cell_width();
    if (t > reach + tol) {
      break;
    }
    GridFunction u = assemble_u_eps(traj.knots, t, run_cfg, params);
    traj.sample_times.push_back(t);
    traj.sample_defects.push_back(dist_to_C(u, params.kappa()));
    traj.samples.push_back(std::move(u));
  }
  return traj;
}

GridFunction assemble_u_eps(const std::vector<Knot>& knots, double t,
                            const SchemeConfig& cfg,
                            const ModelParams& params) {
  if (knots.empty()) {
    throw std::invalid_argument("assemble_u_eps: empty knot sequence");
  }
  const double tol = 1e-9 * std::max(1.0, knots.back().l);
  if (t < -tol || t > knots.back().l + tol) {
    throw std::out_of_range("assemble_u_eps: time outside the knot span");
  }
  // Knot times are exact sample points.
  for (const Knot& k : knots) {
    if (std::abs(t - k.l) <= tol) {
      return k.y;
    }
  }
  std::size_t k = 0;
  while (k + 1 < knots.size() && knots[k + 1].l < t) {
    ++k;
  }
  const Knot& knot = knots[k];
  const double h = t - knot.l;
  return predictor(knot.y, h, cfg.gamma, params) + h * knot.H;
}

ConvergenceResult converge_run(const GridFunction& x0,
                               const SchemeConfig& cfg,
                               const ModelParams& params,
                               std::size_t levels) {
  if (levels < 2) {
    throw std::invalid_argument("converge_run: need at least two levels");
  }
  ConvergenceResult out;
  for (std::size_t j = 0; j < levels; ++j) {
    SchemeConfig level_cfg = cfg;
    level_cfg.epsilon = cfg.epsilon / std::pow(2.0, static_cast<double>(j));
    Trajectory traj = build_knots(x0, level_cfg, params);
    if (traj.terminated_by != Termination::horizon) {
      throw std::runtime_error(
          std::string("converge_run: level terminated by ") +
          to_string(traj.terminated_by));
    }
    out.epsilons.push_back(level_cfg.epsilon);
    out.levels.push_back(std::move(traj));
  }
  for (std::size_t j = 0; j + 1 < levels; ++j) {
    const Trajectory& a = out.levels[j];
    const Trajectory& b = out.levels[j + 1];
    const std::size_t n = std::min(a.samples.size(), b.samples.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sup = std::max(sup, lp_norm(a.samples[i] - b.samples[i]));
    }
    out.cauchy.push_back(sup);
  }
  return out;
}

}  // namespace ageinv
