#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "snse/cutoffs.hpp"
#include "snse/grid.hpp"
#include "snse/initial_data.hpp"
#include "snse/norms.hpp"

using namespace snse;

TEST_CASE("transition function is an exact plateau with a smooth ramp") {
  CHECK(theta(0.0) == 1.0);
  CHECK(theta(0.3) == 1.0);
  CHECK(theta(1.0) == 1.0);
  CHECK(theta(2.0) == 0.0);
  CHECK(theta(5.0) == 0.0);
  const double mid = theta(1.5);
  CHECK(mid > 0.0);
  CHECK(mid < 1.0);
  CHECK(theta(1.5) == doctest::Approx(0.5).epsilon(1e-12));  // S is symmetric

  double prev = 2.0;
  for (int i = 0; i <= 400; ++i) {
    const double v = theta(i * 0.01);
    CHECK(v <= prev + 1e-15);
    prev = v;
  }

  // Flat junctions: one-sided differences at the plateau edges stay at the
  // infinitely-flat scale, not the O(h) of a kink.
  const double h = 1e-3;
  CHECK(std::fabs(theta(1.0 + h) - theta(1.0)) <= 1e-10);
  CHECK(std::fabs(theta(2.0) - theta(2.0 - h)) <= 1e-10);

  CHECK_THROWS_AS(theta(-0.1), std::invalid_argument);
}

TEST_CASE("cutoff wiring matches the transition of the scaled norms") {
  auto grid = make_grid(16);
  VectorField v = make_test_field("random-band", 0.02, 17, grid);
  const double n6 = lp_norm(v, 6.0, NormMode::magnitude);
  const double n3 = lp_norm(v, 3.0, NormMode::magnitude);

  for (double cap : {0.5 * n6, n6 / 1.5, 2.0 * n6}) {
    CHECK(psi(v, cap) == psi_from_norm(n6, cap));
    CHECK(psi_from_norm(n6, cap) == theta(n6 / cap));
  }
  for (int k : {0, 2, 5}) {
    const double eps_bar = 0.04;
    CHECK(phi(v, k, eps_bar) == phi_from_norm(n3, k, eps_bar));
    CHECK(phi_from_norm(n3, k, eps_bar) == theta(std::pow(2.0, k) * n3 / eps_bar));
  }

  // phi saturates at the documented knees: half the budget keeps the factor
  // at one, double the budget turns it off.
  const int k = 3;
  const double eps_bar = 0.04;
  CHECK(phi_from_norm(eps_bar / std::pow(2.0, k + 1), k, eps_bar) == 1.0);
  CHECK(phi_from_norm(eps_bar / std::pow(2.0, k - 1), k, eps_bar) == 0.0);
}

TEST_CASE("zeta is the running product of lower-level factors") {
  const std::vector<double> psis{0.5, 0.25, 1.0, 0.75};
  CHECK(zeta(psis, 0) == 1.0);
  CHECK(zeta(psis, 1) == 0.5);
  CHECK(zeta(psis, 2) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(zeta(psis, 4) == doctest::Approx(0.09375).epsilon(1e-15));
}

TEST_CASE("parameter validation names the violated constraint") {
  CutoffParams p;
  p.eps0 = 2e-3;
  p.eps_bar = 0.016;
  p.level_caps = {10.0, 20.0, 40.0};
  std::string why;
  CHECK(p.valid(&why));

  p.eps_bar = 2.0 * p.eps0;
  CHECK(!p.valid(&why));
  CHECK(why == "eps_bar must exceed 2*eps0");

  p.eps_bar = 1.0;
  CHECK(!p.valid(&why));
  CHECK(why == "eps_bar must be below 1");

  p.eps_bar = 0.016;
  p.level_caps = {10.0, 10.0};
  CHECK(!p.valid(&why));
  CHECK(why == "level_caps must be strictly increasing");

  p.level_caps = {};
  CHECK(!p.valid(&why));
  CHECK(why == "level_caps must be nonempty");

  p.level_caps = {10.0, -1.0};
  CHECK(!p.valid(&why));
  CHECK(why == "level_caps must be positive");
}

TEST_CASE("default caps dominate the level norms and grow geometrically") {
  auto grid = make_grid(16);
  const double eps0 = 0.01;
  VectorField u0 = make_initial_condition("random-band", eps0, 7, grid);
  DecompositionResult dec = decompose(u0, eps0, 4);

  const double growth = 2.0;
  CutoffParams p = make_cutoff_params(dec, 8.0 * eps0, 10.0, growth);
  REQUIRE(p.level_caps.size() == dec.levels.size());
  CHECK(p.eps0 == eps0);
  for (std::size_t k = 0; k < p.level_caps.size(); ++k) {
    CHECK(p.level_caps[k] > lp_norm(dec.levels[k], 6.0, NormMode::magnitude));
    if (k > 0) {
      CHECK(p.level_caps[k] >= growth * p.level_caps[k - 1] * (1.0 - 1e-12));
    }
  }
  std::string why;
  CHECK(p.valid(&why));

  // eps_bar at or below 2*eps0 cannot produce valid parameters.
  CHECK_THROWS_AS(make_cutoff_params(dec, 2.0 * eps0), std::invalid_argument);
}
