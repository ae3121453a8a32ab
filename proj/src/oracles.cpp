#include "ageinv/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ageinv/semigroup.hpp"

namespace ageinv {

namespace {

// One window of the Picard iteration on [0, K*da] from the initial state u0.
// Appends the interior lattice states (k = 1..K) to out and records the
// successive sup-differences.
GridFunction picard_window(const GridFunction& u0, std::size_t n_steps,
                           std::size_t iters, const ModelParams& params,
                           double tol, std::vector<GridFunction>& out,
                           std::vector<double>& diffs) {
  const AgeGrid& grid = u0.grid();
  const double da = grid.cell_width();

  // Homogeneous part T(s_k) u0, shared by all iterates.
  std::vector<GridFunction> transported;
  transported.reserve(n_steps + 1);
  transported.push_back(u0);
  for (std::size_t k = 1; k <= n_steps; ++k) {
    transported.push_back(shift_right(transported.back(), 1));
  }

  std::vector<GridFunction> u = transported;  // zeroth iterate
  std::size_t rising = 0;
  for (std::size_t it = 0; it < iters; ++it) {
    // (S diamond f)(s_k) by the exact one-step recursion, with the step
    // forcing sampled from the current iterate at the lattice points.
    std::vector<GridFunction> next;
    next.reserve(n_steps + 1);
    next.push_back(u0);
    GridFunction v(grid, u0.n_comp());
    for (std::size_t k = 0; k < n_steps; ++k) {
      const std::vector<double> births = F0(u[k], params);
      const GridFunction mortality = F1(u[k], params);
      v = shift_right(v, 1);
      auto first = v.cell(0);
      for (std::size_t c = 0; c < births.size(); ++c) {
        first[c] += births[c];
      }
      auto vv = v.values();
      auto mv = mortality.values();
      for (std::size_t i = 0; i < vv.size(); ++i) {
        vv[i] += da * mv[i];
      }
      next.push_back(transported[k + 1] + v);
    }
    double sup = 0.0;
    for (std::size_t k = 0; k <= n_steps; ++k) {
      sup = std::max(sup, lp_norm(next[k] - u[k]));
    }
    u = std::move(next);
    diffs.push_back(sup);
    if (sup < tol) {
      for (std::size_t k = 1; k <= n_steps; ++k) {
        out.push_back(u[k]);
      }
      return u[n_steps];
    }
    const std::size_t m = diffs.size();
    if (m >= 2 && diffs[m - 1] >= diffs[m - 2]) {
      if (++rising >= 3) {
        throw std::runtime_error(
            "picard_solve: iteration is not contracting");
      }
    } else {
      rising = 0;
    }
  }
  for (std::size_t k = 1; k <= n_steps; ++k) {
    out.push_back(u[k]);
  }
  return u[n_steps];
}

}  // namespace

PicardResult picard_solve(const GridFunction& x0, double tau,
                          std::size_t iters, const ModelParams& params,
                          double window, double tol) {
  const AgeGrid& grid = x0.grid();
  const std::size_t total = grid.cells_of(tau);
  const std::size_t per_window = std::max<std::size_t>(
      1, static_cast<std::size_t>(
             std::floor(window / grid.cell_width() + 1e-9)));

  PicardResult result;
  result.solution.states.push_back(x0);
  GridFunction current = x0;
  std::size_t done = 0;
  while (done < total) {
    const std::size_t n_steps = std::min(per_window, total - done);
    current = picard_window(current, n_steps, iters, params, tol,
                            result.solution.states, result.iterate_diffs);
    done += n_steps;
  }
  for (std::size_t k = 0; k <= total; ++k) {
    result.solution.times.push_back(static_cast<double>(k) *
                                    grid.cell_width());
  }
  result.converged =
      result.iterate_diffs.empty() || result.iterate_diffs.back() < tol;
  return result;
}

OracleSolution characteristics_solve(const GridFunction& x0, double tau,
                                     const ModelParams& params) {
  const AgeGrid& grid = x0.grid();
  const double da = grid.cell_width();
  const double kappa = params.kappa();
  const std::size_t total = grid.cells_of(tau);
  const std::size_t n = x0.n_comp();

  auto reaction = [&](std::span<const double> w, double mu,
                      std::span<double> out) {
    const double cap = chi(kappa - theta(w), kappa);
    for (std::size_t c = 0; c < out.size(); ++c) {
      out[c] = -mu * chi(w[c], kappa) * cap;
    }
  };

  OracleSolution sol;
  sol.times.push_back(0.0);
  sol.states.push_back(x0);

  std::vector<double> k1(n), k2(n), k3(n), k4(n), stage(n);
  GridFunction state = x0;
  for (std::size_t step = 1; step <= total; ++step) {
    GridFunction next(grid, n);
    // Renewal inflow from the previous state fills the youngest cell.
    for (std::size_t i = 0; i < state.n_cells(); ++i) {
      const double b = params.beta()[i];
      if (b == 0.0) {
        continue;
      }
      const auto v = state.cell(i);
      const double cap = chi(kappa - theta(v), kappa);
      auto first = next.cell(0);
      for (std::size_t c = 0; c < n; ++c) {
        first[c] += b * chi(v[c], kappa) * cap * da;
      }
    }
    // Each remaining cell advances along its characteristic with a single
    // classical Runge-Kutta step; the mortality is frozen at the midpoint
    // of the traversed age interval.
    for (std::size_t i = state.n_cells(); i-- > 1;) {
      const auto src = state.cell(i - 1);
      const double mu = 0.5 * (params.mu()[i - 1] + params.mu()[i]);
      reaction(src, mu, k1);
      for (std::size_t c = 0; c < n; ++c) {
        stage[c] = src[c] + 0.5 * da * k1[c];
      }
      reaction(stage, mu, k2);
      for (std::size_t c = 0; c < n; ++c) {
        stage[c] = src[c] + 0.5 * da * k2[c];
      }
      reaction(stage, mu, k3);
      for (std::size_t c = 0; c < n; ++c) {
        stage[c] = src[c] + da * k3[c];
      }
      reaction(stage, mu, k4);
      auto dst = next.cell(i);
      for (std::size_t c = 0; c < n; ++c) {
        dst[c] = src[c] +
                 da / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
      }
    }
    state = std::move(next);
    sol.times.push_back(static_cast<double>(step) * da);
    sol.states.push_back(state);
  }
  return sol;
}

}  // namespace ageinv
