#pragma once

#include "snse/field.hpp"

namespace snse {

enum class NormMode { componentwise, magnitude };

// Grid-quadrature L^p norm, ((2pi)^3/n^3 * sum |.|^p)^(1/p); p = inf gives
// the max. Supported exponents: 2, 3, 6, 9, inf. For a VectorField,
// componentwise mode stacks the three components into one long sample
// vector; magnitude mode takes the pointwise Euclidean norm first.
double lp_norm(const ScalarField& f, double p);
double lp_norm(const VectorField& u, double p, NormMode mode);

// h^3 * sum |D(|f|^(p/2))|^2 with D the second-order central difference.
// |f|^(p/2) is not band-limited, so spectral differentiation would alias;
// this is a diagnostic-grade quantity. p in {2, 3, 6}.
double dissipation(const ScalarField& f, int p);

// Sum of dissipation over the three components.
double dissipation_sum(const VectorField& u, int p);

// ||f||_{3p}^p / dissipation(f, p) for mean-zero f. Rejects fields whose
// mean exceeds 1e-10 * ||f||_2.
double interp_ratio(const ScalarField& f, int p);

namespace detail {
// Unvalidated exponent (interp_ratio needs p = 18 internally).
double lp_norm_any(const ScalarField& f, double p);
}  // namespace detail

}  // namespace snse
