#include "snse/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace snse::fft {
namespace {

struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
};

// Plan creation is not reentrant in FFTW; execution via the new-array
// interface is. Plans are created once per grid size with FFTW_ESTIMATE
// (deterministic plans, no measurement noise) and FFTW_UNALIGNED so they
// accept any caller buffer.
PlanPair& plans_for(const GridSpec& g) {
  static std::mutex mu;
  static std::map<int, PlanPair> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(g.n);
  if (it != cache.end()) return it->second;

  const int n = g.n;
  std::vector<double> rbuf(g.phys_size());
  std::vector<fftw_complex> cbuf(g.spec_size());
  PlanPair p;
  // Physical layout is x-fastest, so x is the last (contiguous, halved) dim.
  p.fwd = fftw_plan_dft_r2c_3d(n, n, n, rbuf.data(), cbuf.data(),
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.inv = fftw_plan_dft_c2r_3d(n, n, n, cbuf.data(), rbuf.data(),
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p.fwd || !p.inv) throw std::runtime_error("fftw plan creation failed");
  return cache.emplace(n, p).first->second;
}

}  // namespace

void forward(const GridSpec& g, const double* phys, std::complex<double>* spec) {
  PlanPair& p = plans_for(g);
  // r2c with FFTW_PRESERVE_INPUT semantics holds for rank > 1 r2c, but the
  // new-array interface needs a non-const pointer; FFTW does not modify it.
  thread_local std::vector<double> in;
  in.assign(phys, phys + g.phys_size());
  fftw_execute_dft_r2c(p.fwd, in.data(), reinterpret_cast<fftw_complex*>(spec));
  const double scale = 1.0 / static_cast<double>(g.phys_size());
  const std::size_t m = g.spec_size();
  for (std::size_t i = 0; i < m; ++i) spec[i] *= scale;
}

void inverse(const GridSpec& g, const std::complex<double>* spec, double* phys) {
  PlanPair& p = plans_for(g);
  // Multi-dimensional c2r destroys its input; work on a scratch copy.
  thread_local std::vector<std::complex<double>> scratch;
  scratch.assign(spec, spec + g.spec_size());
  fftw_execute_dft_c2r(p.inv, reinterpret_cast<fftw_complex*>(scratch.data()),
                       phys);
}

}  // namespace snse::fft
