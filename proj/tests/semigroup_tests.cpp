#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ageinv/semigroup.hpp"
#include "helpers.hpp"

using namespace ageinv;
using testutil::from_values;
using testutil::random_function;

TEST_CASE("apply_T0 basics") {
  AgeGrid grid(0.01, 100, 2.0);
  Rng rng(21);
  GridFunction f = random_function(grid, 1, rng);

  CHECK(lp_norm(apply_T0(f, 0.0) - f) == 0.0);
  CHECK(lp_norm(apply_T0(f, grid.a_max())) == 0.0);

  GridFunction c(grid, 1);
  for (double& v : c.values()) {
    v = 3.0;
  }
  GridFunction shifted = apply_T0(c, 0.01);
  CHECK(shifted(0, 0) == 0.0);
  for (std::size_t i = 1; i < grid.n_cells(); ++i) {
    CHECK(shifted(i, 0) == 3.0);
  }
  CHECK_THROWS_AS(apply_T0(f, 0.013), std::invalid_argument);
}

TEST_CASE("apply_T0 semigroup law and contraction") {
  AgeGrid grid(0.01, 200, 2.0);
  Rng rng(22);
  for (int i = 0; i < 100; ++i) {
    GridFunction f = random_function(grid, 2, rng);
    const double s = static_cast<double>(rng.below(50)) * 0.01;
    const double t = static_cast<double>(rng.below(50)) * 0.01;
    GridFunction lhs = apply_T0(apply_T0(f, s), t);
    GridFunction rhs = apply_T0(f, s + t);
    CHECK(lp_norm(lhs - rhs) == 0.0);
    CHECK(lp_norm(apply_T0(f, t)) <= lp_norm(f) + 1e-15);
  }
}

TEST_CASE("apply_T0_shifted scaling") {
  AgeGrid grid(0.5, 4, 2.0);
  Rng rng(23);
  GridFunction f = random_function(grid, 1, rng);
  CHECK(lp_norm(apply_T0_shifted(f, 1.0, 0.0) - apply_T0(f, 1.0)) == 0.0);
  CHECK(lp_norm(apply_T0_shifted(f, 0.0, 2.0) - f) == 0.0);

  GridFunction ones(grid, 1);
  for (double& v : ones.values()) {
    v = 1.0;
  }
  GridFunction half = apply_T0_shifted(ones, 1.0, std::log(2.0));
  GridFunction plain = apply_T0(ones, 1.0);
  for (std::size_t i = 0; i < grid.n_cells(); ++i) {
    CHECK(half(i, 0) == doctest::Approx(0.5 * plain(i, 0)));
  }
}

TEST_CASE("apply_S hand values") {
  AgeGrid grid(0.01, 100, 2.0);
  GridFunction zero(grid, 1);
  std::vector<double> x{1.0};

  CHECK(lp_norm(apply_S(x, zero, 0.0)) == 0.0);

  GridFunction boundary_only = apply_S(x, zero, 0.02);
  CHECK(boundary_only(0, 0) == 1.0);
  CHECK(boundary_only(1, 0) == 1.0);
  for (std::size_t i = 2; i < grid.n_cells(); ++i) {
    CHECK(boundary_only(i, 0) == 0.0);
  }

  const double c = 0.7;
  GridFunction cf(grid, 1);
  for (double& v : cf.values()) {
    v = c;
  }
  std::vector<double> x0{0.0};
  GridFunction integ = apply_S(x0, cf, 0.02);
  CHECK(integ(0, 0) == doctest::Approx(c * 0.01));
  CHECK(integ(1, 0) == doctest::Approx(2.0 * c * 0.01));
  for (std::size_t i = 2; i < grid.n_cells(); ++i) {
    CHECK(integ(i, 0) == doctest::Approx(2.0 * c * 0.01));
  }
}

TEST_CASE("integrated-semigroup translation identity") {
  AgeGrid grid(0.01, 300, 2.0);
  Rng rng(24);
  for (int i = 0; i < 100; ++i) {
    GridFunction f = random_function(grid, 1, rng);
    std::vector<double> x{rng.uniform(-1.0, 1.0)};
    const double sigma = static_cast<double>(rng.below(100)) * 0.01;
    const double h = static_cast<double>(1 + rng.below(100)) * 0.01;
    GridFunction lhs = apply_S(x, f, sigma + h) - apply_S(x, f, sigma);
    GridFunction rhs = apply_T0(apply_S(x, f, h), sigma);
    CHECK(lp_norm(lhs - rhs) <= 1e-12);
  }
}

TEST_CASE("shifted translation identity with gamma") {
  AgeGrid grid(0.01, 300, 2.0);
  Rng rng(25);
  const double gamma = 0.7;
  for (int i = 0; i < 100; ++i) {
    GridFunction f = random_function(grid, 1, rng);
    std::vector<double> x{rng.uniform(-1.0, 1.0)};
    const double sigma = static_cast<double>(rng.below(100)) * 0.01;
    const double h = static_cast<double>(1 + rng.below(100)) * 0.01;
    GridFunction lhs = apply_S_shifted(x, f, sigma + h, gamma) -
                       apply_S_shifted(x, f, sigma, gamma);
    GridFunction rhs =
        apply_T0_shifted(apply_S_shifted(x, f, h, gamma), sigma, gamma);
    CHECK(lp_norm(lhs - rhs) <= 1e-12);
  }
  GridFunction f = random_function(grid, 1, rng);
  std::vector<double> x{0.3};
  CHECK(lp_norm(apply_S_shifted(x, f, 0.5, 0.0) - apply_S(x, f, 0.5)) == 0.0);
}

TEST_CASE("estimate_delta shape") {
  AgeGrid grid(0.01, 200, 2.0);
  DeltaEstimator est(grid, 1, 40, 2026);

  // Nondecreasing in t.
  double prev = 0.0;
  for (int m = 1; m <= 50; ++m) {
    const double d = est.delta(0.01 * m);
    CHECK(d >= prev);
    prev = d;
  }
  // Boundary impulse lower bound: delta(t) >= t^{1/p}.
  for (double t : {0.01, 0.04, 0.16, 0.5}) {
    CHECK(est.delta(t) >= std::pow(t, 0.5) * (1.0 - 1e-9));
  }
  // Decreasing towards 0 as t -> 0.
  CHECK(est.delta(0.01) < est.delta(0.25));
  CHECK(est.delta(0.01) <= (std::pow(0.01, 0.5) + 0.01) * 2.0);

  CHECK(estimate_delta(grid, 1, 0.1, 40) == doctest::Approx(est.delta(0.1)));
}
