#include "ageinv/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ageinv {

AgeGrid::AgeGrid(double cell_width, std::size_t n_cells, double p)
    : cell_width_(cell_width), n_cells_(n_cells), p_(p) {
  if (!(cell_width > 0.0)) {
    throw std::invalid_argument("AgeGrid: cell width must be positive");
  }
  if (n_cells < 1) {
    throw std::invalid_argument("AgeGrid: need at least one cell");
  }
  if (!(p >= 1.0)) {
    throw std::invalid_argument("AgeGrid: L^p exponent must satisfy p >= 1");
  }
}

bool AgeGrid::aligned(double t) const {
  if (t < 0.0) {
    return false;
  }
  const double ratio = t / cell_width_;
  const double nearest = std::round(ratio);
  return std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest);
}

std::size_t AgeGrid::cells_of(double t) const {
  if (!aligned(t)) {
    throw std::invalid_argument("time " + std::to_string(t) +
                                " is not aligned to cell width " +
                                std::to_string(cell_width_));
  }
  return static_cast<std::size_t>(std::llround(t / cell_width_));
}

GridFunction::GridFunction(AgeGrid grid, std::size_t n_comp)
    : grid_(grid), n_comp_(n_comp), values_(grid.n_cells() * n_comp, 0.0) {
  if (n_comp < 1) {
    throw std::invalid_argument("GridFunction: need at least one component");
  }
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    values_[i] += other.values_[i];
  }
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    values_[i] -= other.values_[i];
  }
  return *this;
}

GridFunction& GridFunction::operator*=(double s) {
  for (double& v : values_) {
    v *= s;
  }
  return *this;
}

GridFunction operator+(GridFunction a, const GridFunction& b) {
  a += b;
  return a;
}

GridFunction operator-(GridFunction a, const GridFunction& b) {
  a -= b;
  return a;
}

GridFunction operator*(double s, GridFunction f) {
  f *= s;
  return f;
}

StatePair::StatePair(std::vector<double> b, GridFunction d)
    : boundary(std::move(b)), density(std::move(d)) {
  if (boundary.size() != density.n_comp()) {
    throw std::invalid_argument(
        "StatePair: boundary dimension must match density components");
  }
}

StatePair StatePair::zero(const AgeGrid& grid, std::size_t n_comp) {
  return StatePair(std::vector<double>(n_comp, 0.0),
                   GridFunction(grid, n_comp));
}

double vector_lp_norm(std::span<const double> v, double p) {
  double acc = 0.0;
  for (double x : v) {
    acc += std::pow(std::abs(x), p);
  }
  return std::pow(acc, 1.0 / p);
}

double lp_norm(const GridFunction& f) {
  const double p = f.grid().p();
  double acc = 0.0;
  for (double x : f.values()) {
    acc += std::pow(std::abs(x), p);
  }
  return std::pow(acc * f.grid().cell_width(), 1.0 / p);
}

double state_norm(const StatePair& x) {
  return vector_lp_norm(x.boundary, x.density.grid().p()) +
         lp_norm(x.density);
}

double theta(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

double chi(double s, double kappa) {
  return std::min(kappa, std::max(s, 0.0));
}

GridFunction shift_right(const GridFunction& f, std::size_t m) {
  GridFunction out(f.grid(), f.n_comp());
  const std::size_t nc = f.n_cells();
  for (std::size_t i = m; i < nc; ++i) {
    const auto src = f.cell(i - m);
    auto dst = out.cell(i);
    std::copy(src.begin(), src.end(), dst.begin());
  }
  return out;
}

namespace {

// Euclidean projection onto the capped simplex {w >= 0, sum w <= kappa}:
// clamp negatives, and if the sum still exceeds kappa project onto the
// face {w >= 0, sum w = kappa} by the sort-and-threshold rule.
std::vector<double> euclidean_capped_simplex(std::span<const double> v,
                                             double kappa) {
  std::vector<double> w(v.begin(), v.end());
  for (double& x : w) {
    x = std::max(x, 0.0);
  }
  double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (total <= kappa) {
    return w;
  }
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double cum = 0.0;
  double tau = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    cum += sorted[j];
    const double cand = (cum - kappa) / static_cast<double>(j + 1);
    if (j + 1 == sorted.size() || sorted[j + 1] <= cand) {
      tau = cand;
      break;
    }
  }
  std::vector<double> out(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    out[j] = std::max(v[j] - tau, 0.0);
  }
  return out;
}

}  // namespace

double cell_dist_to_K(std::span<const double> v, double kappa, double p) {
  if (v.size() == 1) {
    return std::max({v[0] - kappa, -v[0], 0.0});
  }
  const std::vector<double> near = euclidean_capped_simplex(v, kappa);
  std::vector<double> diff(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    diff[j] = v[j] - near[j];
  }
  return vector_lp_norm(diff, p);
}

std::vector<double> cell_project_to_K(std::span<const double> v,
                                      double kappa) {
  if (v.size() == 1) {
    return {chi(v[0], kappa)};
  }
  // Clamp then cap: componentwise positive part, uniform scaling when the
  // component sum overshoots kappa.
  std::vector<double> w(v.begin(), v.end());
  for (double& x : w) {
    x = std::max(x, 0.0);
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (total > kappa) {
    const double scale = kappa / total;
    for (double& x : w) {
      x *= scale;
    }
  }
  return w;
}

double dist_to_C(const GridFunction& f, double kappa) {
  if (!(kappa > 0.0)) {
    throw std::invalid_argument("dist_to_C: kappa must be positive");
  }
  const double p = f.grid().p();
  double acc = 0.0;
  for (std::size_t i = 0; i < f.n_cells(); ++i) {
    acc += std::pow(cell_dist_to_K(f.cell(i), kappa, p), p);
  }
  return std::pow(acc * f.grid().cell_width(), 1.0 / p);
}

GridFunction project_to_C(const GridFunction& f, double kappa) {
  if (!(kappa > 0.0)) {
    throw std::invalid_argument("project_to_C: kappa must be positive");
  }
  GridFunction out(f.grid(), f.n_comp());
  for (std::size_t i = 0; i < f.n_cells(); ++i) {
    const std::vector<double> w = cell_project_to_K(f.cell(i), kappa);
    auto dst = out.cell(i);
    std::copy(w.begin(), w.end(), dst.begin());
  }
  return out;
}

}  // namespace ageinv
