#pragma once

#include <complex>

#include "snse/grid.hpp"

namespace snse::fft {

// Forward r2c transform with the 1/n^3 normalization folded in, so that
// phys(x) = sum_k spec(k) * exp(i k.x). Plans are cached per grid size
// under a mutex; execution is reentrant.
void forward(const GridSpec& g, const double* phys, std::complex<double>* spec);

// Inverse c2r transform (unnormalized synthesis). The input is copied to a
// per-thread scratch buffer first: FFTW's c2r destroys its input.
void inverse(const GridSpec& g, const std::complex<double>* spec, double* phys);

}  // namespace snse::fft
