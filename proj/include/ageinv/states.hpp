#ifndef AGEINV_STATES_HPP
#define AGEINV_STATES_HPP

#include "ageinv/grid.hpp"
#include "ageinv/rng.hpp"

namespace ageinv {

/// Random smooth nonnegative state inside the band C: a few compactly
/// supported bumps per component, rescaled so the component sum stays
/// below kappa. With saturate = true the profile touches the upper face
/// theta = kappa on some cells and vanishes on others, which is where the
/// predictor actually exercises the boundary of C.
GridFunction random_c_state(const AgeGrid& grid, std::size_t n_comp,
                            double kappa, Rng& rng, bool saturate = false);

}  // namespace ageinv

#endif
