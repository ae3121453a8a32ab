#ifndef AGEINV_GRID_HPP
#define AGEINV_GRID_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace ageinv {

/// Uniform truncation of the age half-line [0, a_max) into cells of width
/// delta_a, together with the L^p exponent used for all norms on it.
class AgeGrid {
public:
  AgeGrid(double cell_width, std::size_t n_cells, double p);

  double cell_width() const { return cell_width_; }
  std::size_t n_cells() const { return n_cells_; }
  double p() const { return p_; }
  double a_max() const { return cell_width_ * static_cast<double>(n_cells_); }

  /// Midpoint of cell i, used when sampling analytic coefficient profiles.
  double cell_center(std::size_t i) const {
    return (static_cast<double>(i) + 0.5) * cell_width_;
  }

  /// Left edge of cell i.
  double cell_left(std::size_t i) const {
    return static_cast<double>(i) * cell_width_;
  }

  /// Converts a grid-aligned time t >= 0 into a cell count. Throws
  /// std::invalid_argument when t is not an integer multiple of the cell
  /// width (no silent interpolation).
  std::size_t cells_of(double t) const;

  /// True when t is a nonnegative integer multiple of the cell width.
  bool aligned(double t) const;

  friend bool operator==(const AgeGrid&, const AgeGrid&) = default;

private:
  double cell_width_;
  std::size_t n_cells_;
  double p_;
};

/// Piecewise-constant (cell-averaged) element of L^p([0,a_max), R^n).
/// Values are stored row-major: cell index outer, component index inner.
class GridFunction {
public:
  GridFunction(AgeGrid grid, std::size_t n_comp);

  const AgeGrid& grid() const { return grid_; }
  std::size_t n_comp() const { return n_comp_; }
  std::size_t n_cells() const { return grid_.n_cells(); }

  double& operator()(std::size_t cell, std::size_t comp) {
    return values_[cell * n_comp_ + comp];
  }
  double operator()(std::size_t cell, std::size_t comp) const {
    return values_[cell * n_comp_ + comp];
  }

  std::span<double> cell(std::size_t i) {
    return {values_.data() + i * n_comp_, n_comp_};
  }
  std::span<const double> cell(std::size_t i) const {
    return {values_.data() + i * n_comp_, n_comp_};
  }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator-=(const GridFunction& other);
  GridFunction& operator*=(double s);

private:
  AgeGrid grid_;
  std::size_t n_comp_;
  std::vector<double> values_;
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator-(GridFunction a, const GridFunction& b);
GridFunction operator*(double s, GridFunction f);

/// Element of X = R^n x L^p. Members of X_0 carry a zero boundary vector.
struct StatePair {
  std::vector<double> boundary;
  GridFunction density;

  StatePair(std::vector<double> b, GridFunction d);

  /// Zero element of X with the given shape.
  static StatePair zero(const AgeGrid& grid, std::size_t n_comp);
};

/// Discrete L^p norm: (sum_cells |f_i|_p^p * delta_a)^(1/p), cell vectors
/// measured in the l^p vector norm so that pointwise constraints factor
/// through cells exactly.
double lp_norm(const GridFunction& f);

/// l^p norm of a plain vector with the grid's exponent.
double vector_lp_norm(std::span<const double> v, double p);

/// Product-space norm on X: boundary l^p norm plus density L^p norm.
double state_norm(const StatePair& x);

/// Component sum of a cell vector.
double theta(std::span<const double> v);

/// Truncation onto [0, kappa]: min(kappa, max(s, 0)).
double chi(double s, double kappa);

/// Translation by m cells towards older ages, filling with zeros. Exact
/// realization of the transport semigroup for grid-aligned times.
GridFunction shift_right(const GridFunction& f, std::size_t m);

/// Distance in the cell l^p norm from v to K = {w >= 0, theta(w) <= kappa}.
/// Exact for scalar cells; for n > 1 the Euclidean capped-simplex projection
/// supplies the near point and the displacement is measured in l^p.
double cell_dist_to_K(std::span<const double> v, double kappa, double p);

/// Nearest point of K for a single cell vector (see cell_dist_to_K).
std::vector<double> cell_project_to_K(std::span<const double> v, double kappa);

/// L^p aggregate of the cell-wise distances to K; zero iff f lies in the
/// invariant band C up to grid resolution.
double dist_to_C(const GridFunction& f, double kappa);

/// Cell-wise projection onto C: scalar cells clamp to [0, kappa]; vector
/// cells clamp componentwise to >= 0 and then scale uniformly when the
/// component sum exceeds kappa.
GridFunction project_to_C(const GridFunction& f, double kappa);

}  // namespace ageinv

#endif
