#include "snse/ensemble.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

#include "snse/cutoffs.hpp"
#include "snse/initial_data.hpp"
#include "snse/noise.hpp"
#include "snse/norms.hpp"
#include "snse/rng.hpp"

namespace snse {

WilsonInterval wilson_interval(std::uint64_t s, std::uint64_t n) {
  WilsonInterval w;
  if (n == 0) {
    w.hi = 1.0;
    return w;
  }
  const double z = 1.959963984540054;  // 97.5% normal quantile
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(s) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  w.p_hat = p;
  w.lo = std::max(0.0, center - half);
  w.hi = std::min(1.0, center + half);
  return w;
}

double EnsembleStats::energy_ratio() const {
  if (eps0 <= 0.0) return 0.0;
  return energy_mean() / (eps0 * eps0 * eps0);
}

void EnsembleStats::merge(const EnsembleStats& other) {
  if (n + n_invalid == 0) {
    eps0 = other.eps0;
    horizon = other.horizon;
  }
  n += other.n;
  n_invalid += other.n_invalid;
  hits += other.hits;
  if (level_hits.size() < other.level_hits.size()) {
    level_hits.resize(other.level_hits.size(), 0);
  }
  for (std::size_t k = 0; k < other.level_hits.size(); ++k) {
    level_hits[k] += other.level_hits[k];
  }
  if (ceiling_violations.size() < other.ceiling_violations.size()) {
    ceiling_violations.resize(other.ceiling_violations.size(), 0);
  }
  for (std::size_t k = 0; k < other.ceiling_violations.size(); ++k) {
    ceiling_violations[k] += other.ceiling_violations[k];
  }
  energy_sum += other.energy_sum;
  energy_sq_sum += other.energy_sq_sum;
}

RealizationResult run_realization(const RunConfig& cfg, std::uint64_t realization) {
  const double eb = cfg.resolved_eps_bar();
  if (eb <= 2.0 * cfg.eps0) {
    throw ConfigError("eps_bar must exceed 2*eps0");
  }
  const int steps = cfg.steps();
  GridPtr grid = make_grid(cfg.grid_n);

  VectorField u0 = make_initial_condition(cfg.data_kind, cfg.eps0,
                                          rng::mix(cfg.seed, realization), grid);
  DecompositionResult d = decompose(u0, cfg.eps0, cfg.k_max);
  CutoffParams params = make_cutoff_params(d, eb, cfg.cap_base, cfg.cap_growth);
  CascadeState state(d, params);
  NoiseBasis basis = make_noise_basis(cfg.mode_count, cfg.eps_sigma);

  RealizationResult res;
  std::vector<double> times, sup3_cubed, diss3;
  times.reserve(steps + 1);
  sup3_cubed.reserve(steps + 1);
  diss3.reserve(steps + 1);

  auto record_sum_sample = [&]() {
    VectorField u = state.partial_sum(cfg.k_max);
    u.to_physical();
    times.push_back(state.t());
    const double m3 = lp_norm(u, 3.0, NormMode::magnitude);
    sup3_cubed.push_back(m3 * m3 * m3);
    diss3.push_back(dissipation_sum(u, 3));
  };

  CascadeOptions opts;
  opts.sample_dissipation = false;  // hit detection reads only the norms
  try {
    for (int s = 0; s < steps; ++s) {
      record_sum_sample();
      const auto inc = sample_increments(cfg.seed, realization, s, cfg.dt,
                                         cfg.mode_count);
      cascade_step(state, basis, inc.draws, cfg.dt, opts);
    }
  } catch (const BlowUpError&) {
    res.valid = false;
    return res;
  }
  record_sum_sample();
  append_terminal_samples(state, /*sample_dissipation=*/false);

  res.record = detect_hits(state.series(), params, cfg.horizon);

  res.level_sup3.assign(cfg.k_max + 1, 0.0);
  for (int k = 0; k <= cfg.k_max; ++k) {
    for (const LevelSample& s : state.series()[k]) {
      res.level_sup3[k] = std::max(res.level_sup3[k], s.norm3);
    }
  }

  // Energy functional truncated at tau ^ horizon: sup of ||u||_3^3 over grid
  // times in [0, cut] plus the left-rectangle dissipation integral over
  // [0, cut).
  const double cut = std::min(res.record.tau, cfg.horizon);
  const double cut_slack = cut * (1.0 + 1e-9);
  double sup = 0.0, integral = 0.0;
  for (std::size_t s = 0; s < times.size(); ++s) {
    if (times[s] <= cut_slack) sup = std::max(sup, sup3_cubed[s]);
    if (times[s] < cut) integral += cfg.dt * diss3[s];
  }
  res.energy_lhs = sup + integral;
  return res;
}

namespace {

int worker_count(std::uint64_t jobs) {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("SNSE_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) hw = v;
  }
  if (static_cast<std::uint64_t>(hw) > jobs) hw = static_cast<int>(jobs);
  return hw;
}

}  // namespace

EnsembleStats run_ensemble(const RunConfig& cfg, std::uint64_t n,
                           std::uint64_t first_realization) {
  if (n == 0) throw std::invalid_argument("ensemble: n must be positive");
  std::vector<std::optional<RealizationResult>> slots(n);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;

  auto work = [&]() {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        slots[i] = run_realization(cfg, first_realization + i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  const int nw = worker_count(n);
  if (nw <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (int i = 0; i < nw; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  EnsembleStats stats;
  stats.eps0 = cfg.eps0;
  stats.horizon = cfg.horizon;
  stats.level_hits.assign(cfg.k_max + 1, 0);
  stats.ceiling_violations.assign(cfg.k_max + 1, 0);
  const double eb = cfg.resolved_eps_bar();

  for (const auto& slot : slots) {
    const RealizationResult& r = *slot;
    if (!r.valid) {
      ++stats.n_invalid;
      continue;
    }
    ++stats.n;
    if (r.record.hit()) ++stats.hits;
    for (int k = 0; k <= cfg.k_max; ++k) {
      if (r.record.tau_k[k] != kNeverHit) ++stats.level_hits[k];
      const double ceiling = (eb / std::pow(2.0, k - 1)) * (1.0 + 10.0 * cfg.dt);
      if (r.level_sup3[k] > ceiling) ++stats.ceiling_violations[k];
    }
    stats.energy_sum += r.energy_lhs;
    stats.energy_sq_sum += r.energy_lhs * r.energy_lhs;
  }
  if (stats.n == 0) {
    throw std::runtime_error("ensemble: every realization tripped the blow-up guard");
  }
  return stats;
}

std::vector<EnergyRow> energy_report(const std::vector<EnsembleStats>& stats) {
  std::vector<EnergyRow> rows;
  rows.reserve(stats.size());
  for (const auto& s : stats) {
    EnergyRow r;
    r.eps0 = s.eps0;
    r.mean_lhs = s.energy_mean();
    r.ratio = s.energy_ratio();
    rows.push_back(r);
  }
  return rows;
}

}  // namespace snse
