#include "ageinv/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ageinv {

StepForcing::StepForcing(std::vector<double> breakpoints,
                         std::vector<StatePair> pieces)
    : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)) {
  if (breakpoints_.size() < 2 || pieces_.size() + 1 != breakpoints_.size()) {
    throw std::invalid_argument(
        "StepForcing: need m+1 breakpoints for m pieces, m >= 1");
  }
  const AgeGrid& grid = pieces_.front().density.grid();
  double prev = -1.0;
  for (double b : breakpoints_) {
    if (!grid.aligned(b)) {
      throw std::invalid_argument("StepForcing: breakpoint " +
                                  std::to_string(b) + " not grid-aligned");
    }
    if (b <= prev) {
      throw std::invalid_argument("StepForcing: breakpoints must be ascending");
    }
    prev = b;
  }
}

const StatePair& StepForcing::at(double t) const {
  if (t < t_begin() || t > t_end()) {
    throw std::out_of_range("StepForcing::at: time outside forcing span");
  }
  if (t >= breakpoints_[breakpoints_.size() - 2]) {
    return pieces_.back();  // right endpoint carries the last piece
  }
  const auto it =
      std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  return pieces_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
}

double StepForcing::sup_norm() const {
  double best = 0.0;
  for (const StatePair& x : pieces_) {
    best = std::max(best, state_norm(x));
  }
  return best;
}

StepForcing StepForcing::tail_from(double t) const {
  if (t < t_begin() || t >= t_end()) {
    throw std::out_of_range("StepForcing::tail_from: time outside span");
  }
  std::vector<double> breaks{0.0};
  std::vector<StatePair> pieces;
  pieces.push_back(at(t));
  for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i) {
    if (breakpoints_[i + 1] > t) {
      breaks.push_back(breakpoints_[i + 1] - t);
      if (i + 1 < pieces_.size()) {
        pieces.push_back(pieces_[i + 1]);
      }
    }
  }
  return StepForcing(std::move(breaks), std::move(pieces));
}

GridFunction s_diamond_indicator(const StatePair& x, double a, double b,
                                 double t, double gamma) {
  if (a >= b) {
    throw std::invalid_argument("s_diamond_indicator: requires a < b");
  }
  const auto s_at = [&](double tau) {
    return apply_S_shifted(x.boundary, x.density, std::max(tau, 0.0), gamma);
  };
  return s_at(t - a) - s_at(t - b);
}

GridFunction s_diamond_step(const StepForcing& f, double t, double gamma) {
  const auto& breaks = f.breakpoints();
  if (t < f.t_begin() || t > f.t_end()) {
    throw std::out_of_range("s_diamond_step: time outside forcing span");
  }
  // Interval index k with t in [t_k, t_{k+1}].
  std::size_t k = f.pieces().size() - 1;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (t <= breaks[i + 1]) {
      k = i;
      break;
    }
  }
  const auto s_at = [&](const StatePair& x, double tau) {
    return apply_S_shifted(x.boundary, x.density, tau, gamma);
  };
  GridFunction out = s_at(f.pieces()[k], t - breaks[k]);
  for (std::size_t i = 0; i < k; ++i) {
    out += s_at(f.pieces()[i], t - breaks[i]);
    out -= s_at(f.pieces()[i], t - breaks[i + 1]);
  }
  return out;
}

BoundCheck s_diamond_bound_check(const StepForcing& f, double t,
                                 DeltaEstimator& delta) {
  BoundCheck out;
  out.lhs = lp_norm(s_diamond_step(f, t));
  out.rhs = delta.delta(t - f.t_begin()) * f.sup_norm();
  out.satisfied = out.lhs <= out.rhs * (1.0 + 1e-9);
  return out;
}

double cocycle_check(const StepForcing& f, double t, double s) {
  const double origin = f.t_begin();
  const double t_abs = origin + t;
  if (t < 0.0 || s < 0.0 || t_abs + s > f.t_end() + 1e-12) {
    throw std::out_of_range("cocycle_check: t + s outside forcing span");
  }
  const GridFunction lhs = s_diamond_step(f, t_abs + s);
  GridFunction rhs = apply_T0(s_diamond_step(f, t_abs), s);
  if (s > 0.0) {
    rhs += s_diamond_step(f.tail_from(t_abs), s);
  }
  return lp_norm(lhs - rhs);
}

}  // namespace ageinv
