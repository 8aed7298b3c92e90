#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "snse/cutoffs.hpp"
#include "snse/field.hpp"
#include "snse/initial_data.hpp"
#include "snse/noise.hpp"

namespace snse {

struct BlowUpError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kBlowUpGuard = 1e6;  // sup-norm halt threshold

// One sample of a level's per-step diagnostics.
struct LevelSample {
  double t = 0.0;
  double norm3 = 0.0;    // magnitude L^3
  double norm6 = 0.0;    // magnitude L^6
  double dissip3 = 0.0;  // sum over components, p = 3
  double dissip6 = 0.0;  // sum over components, p = 6
  double psi = 1.0;
  double phi = 1.0;
  double zeta = 1.0;
};

struct StepReport {
  double dt = 0.0;
  std::uint64_t step = 0;
  std::vector<LevelSample> pre;  // start-of-step values used by the step
};

// Flux forcing for the stochastic heat equation: drift_j = div f_j, i.e.
// component j receives i k . f_hat_j.
using FluxForcing = std::array<VectorField, 3>;

// Integrating-factor Euler-Maruyama step for d u = Lap u + div f + g dW:
//   u_hat' = exp(-|k|^2 dt) (u_hat + dt (i k . f_hat) + sum_m g_hat_m dW_m).
// With f = g = 0 each mode decays exactly by exp(-|k|^2 dt). u must be
// spectral; f and g physical or spectral on the same grid.
VectorField heat_step(const VectorField& u, double dt,
                      const FluxForcing* f = nullptr,
                      const std::vector<VectorField>* g = nullptr,
                      const std::vector<double>* draws = nullptr);

// P(div(a (x) b + b (x) a)) with dealiased products, the symmetrized
// advection pair P(a.grad b) + P(b.grad a) in conservative form.
VectorField advection_pair(const VectorField& a, const VectorField& b);

// P(div(u (x) u)) with dealiased products; equals P(u.grad u) for
// divergence-free u. Callers subtract it from the right side.
VectorField advection(const VectorField& u);

// Direct SNSE step: du = Lap u - P(u.grad u) + sigma(u) dW. Throws
// BlowUpError when the sup norm passes the guard.
VectorField snse_step(const VectorField& u, const NoiseBasis& basis,
                      const std::vector<double>& draws, double dt);

struct CascadeOptions {
  // Within a step, levels advance in order k = 0..k_max. The mixed drift
  // terms of level k couple to the partial sum over levels < k; "updated"
  // uses the already-advanced lower levels (the default), "frozen" uses the
  // start-of-step values, which telescopes to the direct step exactly and
  // leaves no measurable cascade-vs-direct gap. Cutoffs and the noise
  // coupling always use start-of-step values (left-point Ito rule).
  enum class LowerCoupling { updated, frozen };
  LowerCoupling coupling = LowerCoupling::updated;
  bool record_series = true;
  // Per-level dissipation sampling costs six stencil passes per level and
  // step; hit detection only reads the norms, so ensemble runs switch the
  // dissipation columns off (they record as zero).
  bool sample_dissipation = true;
};

class CascadeState {
 public:
  CascadeState(const DecompositionResult& d, CutoffParams params);

  int k_max() const { return static_cast<int>(levels_.size()) - 1; }
  double t() const { return t_; }
  std::uint64_t step_count() const { return step_; }
  const CutoffParams& params() const { return params_; }

  const VectorField& level(int k) const { return levels_[k]; }
  VectorField& level(int k) { return levels_[k]; }
  // u^(k) = v^(0) + ... + v^(k), maintained incrementally.
  const VectorField& partial_sum(int k) const { return sums_[k]; }

  // Recomputes every partial sum from scratch; returns the max spectral
  // coefficient deviation from the incremental sums.
  double verify_partial_sums() const;

  const std::vector<std::vector<LevelSample>>& series() const { return series_; }
  std::vector<std::vector<LevelSample>>& series() { return series_; }

  friend StepReport cascade_step(CascadeState& state, const NoiseBasis& basis,
                                 const std::vector<double>& draws, double dt,
                                 const CascadeOptions& opts);

 private:
  std::vector<VectorField> levels_;
  std::vector<VectorField> sums_;
  CutoffParams params_;
  double t_ = 0.0;
  std::uint64_t step_ = 0;
  std::vector<std::vector<LevelSample>> series_;  // [level][step]
  // True when every initial level vanishes outside the 2/3 mask. Masked
  // drift, low-mode noise, and the diagonal heat factor keep that true for
  // all later steps, so product inputs then need no dealias pass.
  bool band_limited_ = false;
};

// One shared-clock step of the truncated cascade. Level k's right side is
//   -psi_k^2 phi_k^2 [ P(v.grad v) + zeta_{k-1} (P(u^{k-1}.grad v) + P(v.grad u^{k-1})) ]
//   + psi_k^2 phi_k^2 zeta_{k-1,+} (sigma(u^k) - sigma(u^{k-1})) dW
// with all cutoffs and noise couplings evaluated at the step start and one
// dW shared by every level. zeta_{k-1,+} is 1 at k = 0.
StepReport cascade_step(CascadeState& state, const NoiseBasis& basis,
                        const std::vector<double>& draws, double dt,
                        const CascadeOptions& opts = {});

// u^(k_max), the running sum.
VectorField cascade_sum(const CascadeState& state);

// Appends one diagnostics sample at the current time to every level's
// series. Step records are start-of-step values, so one terminal call makes
// the series cover [0, t] inclusive.
void append_terminal_samples(CascadeState& state, bool sample_dissipation = true);

struct ResidualStudy {
  std::vector<double> times;
  std::vector<double> residual3;  // ||u^(K)(t) - u_direct(t)||_3 per step
  double max_residual = 0.0;
  bool truncated = false;  // blow-up guard tripped before the horizon
};

// Runs the cascade and the direct SNSE from the same decomposition, grid,
// dt, noise basis, and Wiener path; u_direct starts from sum_j v0^(j).
ResidualStudy residual_vs_direct(const DecompositionResult& d,
                                 const CutoffParams& params,
                                 const NoiseBasis& basis, double dt, int steps,
                                 std::uint64_t seed, std::uint64_t realization = 0,
                                 const CascadeOptions& opts = {});

struct PicardResult {
  // d_j = sup_{t <= t*} ||V^(j+1) - V^(j)||_6 for j = 0..J-2.
  std::vector<double> diffs;
  bool nonmonotone = false;  // some d_{j+1} > d_j (t* too large)
  // Final iterate trajectory, one spectral field per step (0..steps).
  std::vector<VectorField> trajectory;
};

// Frozen lower-level data for the level-k Picard scheme: w(t) = u^(k-1)(t)
// and the zeta_{k-1}(t) factor along it. Level 0 uses w = 0, zeta = 1.
struct PicardContext {
  int k = 0;
  double eps_bar = 0.0;
  double cap = 0.0;  // M_k for this level
  std::vector<VectorField> w;      // steps+1 spectral fields; empty means 0
  std::vector<double> zeta;        // steps values; empty means 1
};

// Iterates V^(j) of the level-k validation scheme, all driven by one Wiener
// path: V^(j) steps the system whose drift and noise are built from V^(j-1)
// (and w), with coefficient psi_j psi_{j-1} phi_j phi_{j-1} evaluated on the
// current and previous iterates at the step start, and noise
// sigma(V^(j-1) + w) - sigma(w). V^(-1) = 0, V^(j)(0) = v0.
PicardResult picard_solve(const VectorField& v0, const PicardContext& ctx,
                          const NoiseBasis& basis, double dt, double t_star,
                          int max_iters, std::uint64_t seed,
                          std::uint64_t realization = 0);

}  // namespace snse
