#pragma once

#include <cstdint>
#include <vector>

#include "snse/config.hpp"
#include "snse/stopping.hpp"

namespace snse {

struct WilsonInterval {
  double p_hat = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

// 95% Wilson score interval for s successes out of n.
WilsonInterval wilson_interval(std::uint64_t s, std::uint64_t n);

// One realization's contribution, kept in sum form so that merging is
// associative and order-independent.
struct EnsembleStats {
  double eps0 = 0.0;
  double horizon = 0.0;
  std::uint64_t n = 0;          // valid realizations
  std::uint64_t n_invalid = 0;  // blow-up guard trips, excluded from p_hat
  std::uint64_t hits = 0;       // tau < horizon
  std::vector<std::uint64_t> level_hits;          // sup_t ||v^(k)||_3 >= eps_bar/2^k
  std::vector<std::uint64_t> ceiling_violations;  // max_t ||v^(k)||_3 > (eps_bar/2^(k-1))(1+10 dt)
  double energy_sum = 0.0;      // sum over realizations of the EQ-style LHS
  double energy_sq_sum = 0.0;

  WilsonInterval p_tau() const { return wilson_interval(hits, n); }
  double energy_mean() const { return n ? energy_sum / static_cast<double>(n) : 0.0; }
  double energy_ratio() const;  // energy_mean / eps0^3

  void merge(const EnsembleStats& other);
};

struct RealizationResult {
  StoppingRecord record;
  bool valid = true;
  double energy_lhs = 0.0;  // sup_{t<=tau^T} ||u||_3^3 + int_0^{tau^T} sum_j dissip3(u_j)
  std::vector<double> level_sup3;  // max_t ||v^(k)||_3 over the horizon
};

// Decompose, evolve the cascade to the horizon (levels continue past hits;
// the cutoffs keep continuation well-defined), detect hits, and accumulate
// the energy functional up to tau ^ horizon.
RealizationResult run_realization(const RunConfig& cfg, std::uint64_t realization);

// n independent realizations, distributed over a worker pool capped by
// SNSE_THREADS (default: hardware concurrency). Aggregation is slot-indexed,
// so the result is independent of scheduling. Throws when every realization
// is invalid.
EnsembleStats run_ensemble(const RunConfig& cfg, std::uint64_t n,
                           std::uint64_t first_realization = 0);

struct EnergyRow {
  double eps0 = 0.0;
  double mean_lhs = 0.0;
  double ratio = 0.0;  // mean_lhs / eps0^3
};

std::vector<EnergyRow> energy_report(const std::vector<EnsembleStats>& stats);

}  // namespace snse
