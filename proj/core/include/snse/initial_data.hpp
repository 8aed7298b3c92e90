#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "snse/field.hpp"

namespace snse {

struct DecompositionResult {
  std::vector<VectorField> levels;   // v0^(k), spectral representation
  std::vector<double> tail_errors;   // ||u0 - sum_{j<=k} v0^(j)||_3 per k
  std::vector<double> deltas;        // mollification radius used per level
  double eps0 = 0.0;
  // Set when some level's tolerance was unreachable at the grid resolution;
  // tail_errors then reports what was achieved.
  bool truncated = false;
};

// Periodized bump kernel exp(-1/(1 - r^2/delta^2)) normalized to unit grid
// mass, evaluated with wrapped per-axis distances. Rejects deltas the grid
// cannot resolve (delta < 2 * spacing) and delta >= pi.
ScalarField mollifier_kernel(double delta, const GridPtr& grid);

// Convolution with the kernel as a spectral multiplier. Preserves mean zero
// and divergence-freeness exactly; contracts every L^p grid norm.
VectorField mollify(const VectorField& u, double delta);
ScalarField mollify(const ScalarField& f, double delta);

// Level construction: v0^(0) mollifies u0, each later level mollifies the
// running residual, halving delta from pi/4 until the residual meets
// min(eps0/2^(k+4), eps0/4^(k+1)). The second term keeps the norm bound
// ||v0^(k)||_3 <= eps0/4^k available at every depth.
DecompositionResult decompose(const VectorField& u0, double eps0, int k_max);

// Divergence-free mean-zero test data, deterministic in (kind, seed).
//   taylor-green: (a sin x1 cos x2 cos x3, -a cos x1 sin x2 cos x3, 0)
//   single-mode:  (a sin x2, 0, 0)
//   random-band:  Gaussian spectral coefficients, std exp(-1.5 |k|^2) on
//                 |k|_inf <= 2, Leray-projected, then rescaled so the
//                 magnitude L^3 norm equals the amplitude. Coefficients are
//                 keyed per mode, so the embedded field is grid-independent.
VectorField make_test_field(const std::string& kind, double amplitude,
                            std::uint64_t seed, const GridPtr& grid);

// make_test_field rescaled so the magnitude L^3 norm equals eps0 exactly;
// analytic kinds treat the amplitude as a coefficient, not a norm, so this
// is what guarantees the decomposition precondition ||u0||_3 <= eps0.
VectorField make_initial_condition(const std::string& kind, double eps0,
                                   std::uint64_t seed, const GridPtr& grid);

}  // namespace snse
