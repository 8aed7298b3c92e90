#include "snse/stopping.hpp"

#include <cmath>
#include <stdexcept>

namespace snse {

StoppingRecord detect_hits(const std::vector<std::vector<LevelSample>>& series,
                           const CutoffParams& params, double horizon) {
  if (series.empty()) throw std::invalid_argument("detect_hits: empty series");
  if (horizon <= 0.0) throw std::invalid_argument("detect_hits: horizon must be positive");
  const int K = static_cast<int>(series.size()) - 1;
  if (params.level_caps.size() < series.size()) {
    throw std::invalid_argument("detect_hits: missing level caps");
  }

  // Accumulated step times can overshoot the horizon by roundoff; the slack
  // keeps the terminal sample inside while still ignoring appended
  // post-horizon data (which sits at least one step beyond).
  const double t_max = horizon * (1.0 + 1e-9);

  StoppingRecord rec;
  rec.tau_k.assign(K + 1, kNeverHit);
  rec.sigma_k.assign(K + 1, kNeverHit);
  rec.tau_up_to_k.assign(K + 1, kNeverHit);

  for (int k = 0; k <= K; ++k) {
    if (series[k].empty()) {
      throw std::invalid_argument("detect_hits: empty series at level " +
                                  std::to_string(k));
    }
    const double thr3 = params.eps_bar / std::pow(2.0, k);
    const double cap = params.level_caps[k];
    for (const LevelSample& s : series[k]) {
      if (s.t > t_max) continue;
      if (s.norm3 >= thr3) rec.tau_k[k] = std::min(rec.tau_k[k], s.t);
      if (s.norm6 >= cap) rec.sigma_k[k] = std::min(rec.sigma_k[k], s.t);
    }
  }
  double running = kNeverHit;
  for (int k = 0; k <= K; ++k) {
    running = std::min(running, std::min(rec.tau_k[k], rec.sigma_k[k]));
    rec.tau_up_to_k[k] = running;
  }
  rec.tau = rec.tau_up_to_k[K];
  return rec;
}

}  // namespace snse
