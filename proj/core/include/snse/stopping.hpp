#pragma once

#include <limits>
#include <vector>

#include "snse/cutoffs.hpp"
#include "snse/integrator.hpp"

namespace snse {

inline constexpr double kNeverHit = std::numeric_limits<double>::infinity();

struct StoppingRecord {
  // Per level: first grid time with ||v^(k)||_3 >= eps_bar/2^k resp.
  // ||v^(k)||_6 >= M_k; kNeverHit when no crossing happens in the horizon.
  std::vector<double> tau_k;
  std::vector<double> sigma_k;
  // min over levels <= k of min(tau_j, sigma_j); nonincreasing in k.
  std::vector<double> tau_up_to_k;
  double tau = kNeverHit;

  bool hit() const { return tau != kNeverHit; }
};

// First-crossing scan of a recorded norm series: smallest t_n <= horizon
// with the norm at or above its threshold. Appending post-horizon data does
// not change the result. Rejects empty series.
StoppingRecord detect_hits(const std::vector<std::vector<LevelSample>>& series,
                           const CutoffParams& params, double horizon);

}  // namespace snse
