#pragma once

#include <cstdint>
#include <vector>

#include "snse/field.hpp"

namespace snse {

// Truncated cylindrical noise operator. Mode m acts as
//   sigma(u) e_m = eps_sigma * c_m * P0(rho_m * u)
// where rho_m(x) = prod_j (1 + cos(x_j - alpha_{m,j})) / (2pi)^3, a shifted
// low-mode bump with unit L^1 mass. Its Fourier multiplier is exactly 1 at
// k_j = 0, e^{-+ i alpha}/2 at k_j = +-1, and 0 beyond, so the convolution
// is applied analytically. Weights c_m ~ 1/m, normalized to sum c_m^2 = 1.
struct NoiseBasis {
  int mode_count = 0;
  double eps_sigma = 0.0;
  std::vector<double> weights;                  // c_m
  std::vector<std::array<double, 3>> shifts;    // alpha_m

  double weight_tail_sq(int from_mode) const;   // sum_{m >= from_mode} c_m^2
};

NoiseBasis make_noise_basis(int mode_count, double eps_sigma);

// The kernel rho_m sampled on a grid (unit L^1 mass; band-limited).
ScalarField shape_kernel(const NoiseBasis& basis, int m, const GridPtr& grid);

struct WienerIncrements {
  int step = 0;
  double dt = 0.0;
  std::vector<double> draws;  // M values, each N(0, dt)
};

// Counter-based draws keyed by (seed, realization, step, mode); reproducible
// independent of evaluation order.
WienerIncrements sample_increments(std::uint64_t seed, std::uint64_t realization,
                                   std::uint64_t step, double dt, int mode_count);

// All M outputs sigma(t, u) e_m; each divergence-free and mean-zero, linear
// in u, exactly zero for u = 0. The t argument is accepted for forward
// compatibility; the default operator is time-independent.
std::vector<VectorField> sigma_apply(const NoiseBasis& basis, double t,
                                     const VectorField& u);

// One mode of the above, returned spectral.
VectorField sigma_apply_mode(const NoiseBasis& basis, int m, const VectorField& u);

// sum_m sigma(u) e_m * dW_m, the one-step noise contribution.
VectorField sigma_weighted_sum(const NoiseBasis& basis, const VectorField& u,
                               const std::vector<double>& draws);

struct LipschitzReport {
  double max_ratio = 0.0;
  int pairs_used = 0;
  int pairs_skipped = 0;  // coincident pairs (zero denominator)
};

// max over pairs of sqrt(sum_m ||sigma(u1)e_m - sigma(u2)e_m||_p^2) / ||u1-u2||_p.
LipschitzReport lipschitz_report(const NoiseBasis& basis,
                                 const std::vector<std::pair<VectorField, VectorField>>& corpus,
                                 double p);

}  // namespace snse
