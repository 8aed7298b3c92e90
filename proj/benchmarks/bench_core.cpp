// Hot-path microbenchmarks at the two working resolutions. Run with
// --benchmark_filter to isolate a kernel; times include the copy needed to
// keep the input unmutated where the operation is in-place.

#include <benchmark/benchmark.h>

#include "snse/cutoffs.hpp"
#include "snse/field.hpp"
#include "snse/initial_data.hpp"
#include "snse/integrator.hpp"
#include "snse/noise.hpp"
#include "snse/norms.hpp"
#include "snse/spectral.hpp"

using namespace snse;

namespace {

VectorField spectral_input(int n) {
  VectorField u = make_test_field("random-band", 1.0, 7, make_grid(n));
  u.to_spectral();
  return u;
}

void bm_transform_roundtrip(benchmark::State& state) {
  const VectorField u = spectral_input(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    VectorField v = u;
    v.to_physical();
    v.to_spectral();
    benchmark::DoNotOptimize(v[0].spectral().data());
  }
}

void bm_leray_project(benchmark::State& state) {
  const VectorField u = spectral_input(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    VectorField p = leray_project(u);
    benchmark::DoNotOptimize(p[0].spectral().data());
  }
}

void bm_advection(benchmark::State& state) {
  const VectorField u = spectral_input(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    VectorField a = advection(u);
    benchmark::DoNotOptimize(a[0].spectral().data());
  }
}

void bm_lp_norm3(benchmark::State& state) {
  VectorField u = spectral_input(static_cast<int>(state.range(0)));
  u.to_physical();
  for (auto _ : state) {
    benchmark::DoNotOptimize(lp_norm(u, 3.0, NormMode::magnitude));
  }
}

void bm_snse_step(benchmark::State& state) {
  const VectorField u = spectral_input(static_cast<int>(state.range(0)));
  const NoiseBasis basis = make_noise_basis(8, 0.1);
  const auto inc = sample_increments(1, 0, 0, 1e-3, 8);
  for (auto _ : state) {
    VectorField next = snse_step(u, basis, inc.draws, 1e-3);
    benchmark::DoNotOptimize(next[0].spectral().data());
  }
}

void bm_cascade_step(benchmark::State& state) {
  GridPtr grid = make_grid(static_cast<int>(state.range(0)));
  const double eps0 = 0.01;
  VectorField u0 = make_initial_condition("random-band", eps0, 7, grid);
  const DecompositionResult d = decompose(u0, eps0, 3);
  CascadeState cascade(d, make_cutoff_params(d, 0.08));
  const NoiseBasis basis = make_noise_basis(8, 0.1);
  CascadeOptions opts;
  opts.record_series = false;
  std::uint64_t s = 0;
  for (auto _ : state) {
    const auto inc = sample_increments(1, 0, s++, 1e-3, 8);
    benchmark::DoNotOptimize(cascade_step(cascade, basis, inc.draws, 1e-3, opts));
  }
}

}  // namespace

BENCHMARK(bm_transform_roundtrip)->Arg(16)->Arg(32);
BENCHMARK(bm_leray_project)->Arg(16)->Arg(32);
BENCHMARK(bm_advection)->Arg(16)->Arg(32);
BENCHMARK(bm_lp_norm3)->Arg(16)->Arg(32);
BENCHMARK(bm_snse_step)->Arg(16)->Arg(32);
BENCHMARK(bm_cascade_step)->Arg(16)->Arg(32);

BENCHMARK_MAIN();
