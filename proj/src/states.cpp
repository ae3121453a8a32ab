#include "ageinv/states.hpp"

#include <algorithm>
#include <cmath>

namespace ageinv {

GridFunction random_c_state(const AgeGrid& grid, std::size_t n_comp,
                            double kappa, Rng& rng, bool saturate) {
  GridFunction out(grid, n_comp);
  for (std::size_t c = 0; c < n_comp; ++c) {
    for (int b = 0; b < 4; ++b) {
      const double center = rng.uniform(0.0, 0.6 * grid.a_max());
      const double width = rng.uniform(0.4, 1.5);
      const double amp = rng.uniform(0.2, 1.0);
      for (std::size_t i = 0; i < grid.n_cells(); ++i) {
        const double r = (grid.cell_center(i) - center) / width;
        out(i, c) += amp * std::exp(-r * r);
      }
    }
    // Subtract a floor and clamp so the profile has genuine zero regions
    // next to positive ones.
    double peak = 0.0;
    for (std::size_t i = 0; i < grid.n_cells(); ++i) {
      peak = std::max(peak, out(i, c));
    }
    const double floor_level = rng.uniform(0.1, 0.4) * peak;
    for (std::size_t i = 0; i < grid.n_cells(); ++i) {
      out(i, c) = std::max(out(i, c) - floor_level, 0.0);
    }
    // Cut a zero band just below the peak age so the profile always has a
    // vanishing region ageing into positive mass (where the mortality term
    // actually probes the lower face of the band).
    std::size_t peak_cell = 0;
    for (std::size_t i = 0; i < grid.n_cells(); ++i) {
      if (out(i, c) > out(peak_cell, c)) {
        peak_cell = i;
      }
    }
    const double peak_age = grid.cell_center(peak_cell);
    const double gap_lo = peak_age - rng.uniform(0.6, 0.9);
    const double gap_hi = peak_age - rng.uniform(0.2, 0.3);
    for (std::size_t i = 0; i < grid.n_cells(); ++i) {
      const double a = grid.cell_center(i);
      if (a >= gap_lo && a <= gap_hi) {
        out(i, c) = 0.0;
      }
    }
  }
  double theta_max = 0.0;
  for (std::size_t i = 0; i < grid.n_cells(); ++i) {
    theta_max = std::max(theta_max, theta(out.cell(i)));
  }
  if (theta_max > 0.0) {
    const double target =
        saturate ? kappa : rng.uniform(0.3, 0.9) * kappa;
    out *= target / theta_max;
  }
  return project_to_C(out, kappa);
}

}  // namespace ageinv
