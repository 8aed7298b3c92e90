#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "snse/rng.hpp"
#include "snse/stopping.hpp"

using namespace snse;

namespace {

CutoffParams demo_params(int levels) {
  CutoffParams p;
  p.eps0 = 2e-3;
  p.eps_bar = 0.016;
  double cap = 1.0;
  for (int k = 0; k < levels; ++k, cap *= 2.0) p.level_caps.push_back(cap);
  return p;
}

LevelSample at(double t, double norm3, double norm6) {
  LevelSample s;
  s.t = t;
  s.norm3 = norm3;
  s.norm6 = norm6;
  return s;
}

// Flat series of `steps` samples at spacing dt, far from both thresholds.
std::vector<LevelSample> quiet_series(int steps, double dt) {
  std::vector<LevelSample> v;
  for (int s = 0; s <= steps; ++s) v.push_back(at(s * dt, 1e-6, 1e-6));
  return v;
}

}  // namespace

TEST_CASE("no crossing leaves every marker at the never-hit sentinel") {
  const double dt = 1e-3;
  std::vector<std::vector<LevelSample>> series{quiet_series(100, dt),
                                               quiet_series(100, dt)};
  const auto rec = detect_hits(series, demo_params(2), 0.1);
  CHECK(!rec.hit());
  CHECK(rec.tau == kNeverHit);
  for (int k = 0; k < 2; ++k) {
    CHECK(rec.tau_k[k] == kNeverHit);
    CHECK(rec.sigma_k[k] == kNeverHit);
    CHECK(rec.tau_up_to_k[k] == kNeverHit);
  }
}

TEST_CASE("first crossing time is reported per level and cumulatively") {
  const double dt = 1e-3;
  CutoffParams p = demo_params(3);
  std::vector<std::vector<LevelSample>> series{
      quiet_series(100, dt), quiet_series(100, dt), quiet_series(100, dt)};
  // Level 2 crosses its norm3 threshold eps_bar/4 at step 7 and stays up.
  const double thr2 = p.eps_bar / 4.0;
  for (int s = 7; s <= 100; ++s) series[2][s].norm3 = thr2 * 1.01;

  const auto rec = detect_hits(series, p, 0.1);
  CHECK(rec.hit());
  CHECK(rec.tau == 7 * dt);
  CHECK(rec.tau_k[2] == 7 * dt);
  CHECK(rec.tau_k[0] == kNeverHit);
  CHECK(rec.sigma_k[2] == kNeverHit);
  CHECK(rec.tau_up_to_k[0] == kNeverHit);
  CHECK(rec.tau_up_to_k[1] == kNeverHit);
  CHECK(rec.tau_up_to_k[2] == 7 * dt);
}

TEST_CASE("the wedge takes the earliest of norm3 and norm6 crossings") {
  const double dt = 1e-3;
  CutoffParams p = demo_params(2);
  std::vector<std::vector<LevelSample>> series{quiet_series(50, dt),
                                               quiet_series(50, dt)};
  // Level 0 crosses the norm6 cap at step 9; level 1 crosses norm3 at step 5.
  series[0][9].norm6 = p.level_caps[0] * 2.0;
  for (int s = 5; s <= 50; ++s) series[1][s].norm3 = p.eps_bar;  // >= thr at k=1

  const auto rec = detect_hits(series, p, 0.1);
  CHECK(rec.sigma_k[0] == 9 * dt);
  CHECK(rec.tau_k[1] == 5 * dt);
  CHECK(rec.tau_up_to_k[0] == 9 * dt);
  CHECK(rec.tau_up_to_k[1] == 5 * dt);
  CHECK(rec.tau == 5 * dt);
}

TEST_CASE("crossings at exactly the threshold count") {
  const double dt = 1e-3;
  CutoffParams p = demo_params(1);
  std::vector<std::vector<LevelSample>> series{quiet_series(10, dt)};
  series[0][4].norm3 = p.eps_bar;  // equality, not strict excess
  const auto rec = detect_hits(series, p, 0.1);
  CHECK(rec.tau == 4 * dt);
}

TEST_CASE("post-horizon data is ignored, the terminal sample is not") {
  const double dt = 1e-3;
  CutoffParams p = demo_params(1);
  const double horizon = 0.01;

  std::vector<std::vector<LevelSample>> series{quiet_series(10, dt)};
  const auto before = detect_hits(series, p, horizon);

  // A terminal sample sitting on the horizon up to accumulation roundoff
  // still counts.
  auto with_terminal = series;
  with_terminal[0].push_back(at(horizon * (1.0 + 5e-10), p.eps_bar * 2.0, 0.0));
  const auto term = detect_hits(with_terminal, p, horizon);
  CHECK(term.tau == horizon * (1.0 + 5e-10));

  // Data beyond the horizon cannot change the verdict.
  auto extended = series;
  for (int s = 11; s <= 30; ++s) extended[0].push_back(at(s * dt, 1.0, 1.0));
  const auto after = detect_hits(extended, p, horizon);
  CHECK(after.tau == before.tau);
  CHECK(after.tau_k[0] == before.tau_k[0]);
  CHECK(after.sigma_k[0] == before.sigma_k[0]);
}

TEST_CASE("degenerate inputs are rejected") {
  const double dt = 1e-3;
  CutoffParams p = demo_params(2);
  std::vector<std::vector<LevelSample>> series{quiet_series(10, dt),
                                               quiet_series(10, dt)};
  CHECK_THROWS_AS(detect_hits({}, p, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(detect_hits(series, p, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(detect_hits(series, p, -1.0), std::invalid_argument);

  std::vector<std::vector<LevelSample>> holed{quiet_series(10, dt), {}};
  CHECK_THROWS_AS(detect_hits(holed, p, 0.1), std::invalid_argument);

  CutoffParams short_caps = demo_params(1);
  CHECK_THROWS_AS(detect_hits(series, short_caps, 0.1), std::invalid_argument);
}

TEST_CASE("randomized series keep the record self-consistent") {
  const double dt = 1e-3;
  const int levels = 4;
  CutoffParams p = demo_params(levels);

  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<LevelSample>> series(levels);
    for (int k = 0; k < levels; ++k) {
      for (int s = 0; s <= 40; ++s) {
        const auto z = rng::normal_pair({trial, 900},
                                        {static_cast<std::uint64_t>(k),
                                         static_cast<std::uint64_t>(s), 0, 0});
        // Heavy-tailed enough that some trials cross and some do not.
        const double n3 = std::fabs(z[0]) * 0.004;
        const double n6 = std::fabs(z[1]) * 0.4;
        series[k].push_back(at(s * dt, n3, n6));
      }
    }
    const auto rec = detect_hits(series, p, 0.04);

    double running = kNeverHit;
    for (int k = 0; k < levels; ++k) {
      // Each marker sits on the sampling grid.
      for (double t : {rec.tau_k[k], rec.sigma_k[k]}) {
        if (t != kNeverHit) {
          const double steps = t / dt;
          CHECK(std::fabs(steps - std::round(steps)) <= 1e-9);
          CHECK(t <= 0.04 * (1.0 + 1e-9));
        }
      }
      running = std::min({running, rec.tau_k[k], rec.sigma_k[k]});
      CHECK(rec.tau_up_to_k[k] == running);
      if (k > 0) CHECK(rec.tau_up_to_k[k] <= rec.tau_up_to_k[k - 1]);
    }
    CHECK(rec.tau == rec.tau_up_to_k[levels - 1]);
    CHECK(rec.hit() == (rec.tau != kNeverHit));
  }
}
