#pragma once

#include "snse/field.hpp"

namespace snse {

// Leray projection composed with the mean-zero projection: spectral symbol
// delta_jk - k_j k_k / |k|^2, with the k = 0 mode mapped to zero. Idempotent,
// symmetric, annihilates gradients, fixes mean-zero divergence-free fields.
VectorField leray_project(const VectorField& u);

// div u, computed spectrally as i k . u_hat. Result is spectral.
ScalarField divergence(const VectorField& u);

// grad f, computed spectrally as i k f_hat. Result is spectral.
VectorField gradient(const ScalarField& f);

// Zeroes every mode outside the 2/3 mask. Idempotent.
ScalarField dealias(const ScalarField& f);
VectorField dealias(const VectorField& u);

}  // namespace snse
