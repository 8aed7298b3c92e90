#include "snse/initial_data.hpp"

#include <cmath>
#include <stdexcept>

#include "snse/norms.hpp"
#include "snse/rng.hpp"
#include "snse/spectral.hpp"

namespace snse {
namespace {

// Wrapped coordinate distance on [0, 2pi).
inline double wrap(double x) { return std::min(x, kTwoPi - x); }

// Spectral multiplier of the kernel: (2pi)^3 * forward coefficients. Real
// and even because the kernel is; multiplier(0) = 1 by unit mass.
std::vector<double> kernel_multiplier(double delta, const GridPtr& grid) {
  ScalarField k = mollifier_kernel(delta, grid);
  k.to_spectral();
  const auto& s = k.spectral();
  std::vector<double> mult(s.size());
  const double vol = kTwoPi * kTwoPi * kTwoPi;
  for (std::size_t i = 0; i < s.size(); ++i) mult[i] = vol * s[i].real();
  return mult;
}

void apply_multiplier(VectorField& u, const std::vector<double>& mult) {
  u.to_spectral();
  for (int j = 0; j < 3; ++j) {
    auto& s = u[j].spectral();
    for (std::size_t i = 0; i < s.size(); ++i) s[i] *= mult[i];
  }
}

VectorField subtract(const VectorField& a, const VectorField& b) {
  VectorField out = a;
  out.to_spectral();
  out.axpy(-1.0, b);
  return out;
}

}  // namespace

ScalarField mollifier_kernel(double delta, const GridPtr& grid) {
  const GridSpec& g = grid->spec();
  if (delta < 2.0 * g.spacing()) {
    throw std::invalid_argument(
        "mollifier_kernel: delta below 2 grid spacings cannot be resolved");
  }
  if (delta <= 0.0 || delta >= 3.141592653589793) {
    throw std::invalid_argument("mollifier_kernel: delta must lie in (0, pi)");
  }
  ScalarField k(grid, Rep::physical);
  auto& v = k.phys();
  const int n = g.n;
  const double h = g.spacing();
  double sum = 0.0;
  for (int iz = 0; iz < n; ++iz) {
    const double dz = wrap(iz * h);
    for (int iy = 0; iy < n; ++iy) {
      const double dy = wrap(iy * h);
      for (int ix = 0; ix < n; ++ix) {
        const double dx = wrap(ix * h);
        const double r2 = (dx * dx + dy * dy + dz * dz) / (delta * delta);
        double val = 0.0;
        if (r2 < 1.0) val = std::exp(-1.0 / (1.0 - r2));
        v[g.phys_index(ix, iy, iz)] = val;
        sum += val;
      }
    }
  }
  // Unit grid quadrature mass: h^3 * sum = 1.
  const double scale = 1.0 / (sum * g.cell_volume());
  for (double& x : v) x *= scale;
  return k;
}

ScalarField mollify(const ScalarField& f, double delta) {
  const auto mult = kernel_multiplier(delta, f.grid_ptr());
  ScalarField out = f;
  out.to_spectral();
  auto& s = out.spectral();
  for (std::size_t i = 0; i < s.size(); ++i) s[i] *= mult[i];
  return out;
}

VectorField mollify(const VectorField& u, double delta) {
  const auto mult = kernel_multiplier(delta, u.grid_ptr());
  VectorField out = u;
  apply_multiplier(out, mult);
  return out;
}

DecompositionResult decompose(const VectorField& u0, double eps0, int k_max) {
  if (eps0 <= 0.0) throw std::invalid_argument("decompose: eps0 must be positive");
  if (k_max < 0) throw std::invalid_argument("decompose: k_max must be >= 0");
  const double norm0 = lp_norm(u0, 3.0, NormMode::magnitude);
  if (norm0 > eps0 * (1.0 + 1e-12)) {
    throw std::invalid_argument("decompose: ||u0||_3 must not exceed eps0");
  }

  const GridPtr& grid = u0.grid_ptr();
  const double delta_min = 2.0 * grid->spec().spacing();
  const double delta_start = 0.7853981633974483;  // pi/4 schedule start

  DecompositionResult out;
  out.eps0 = eps0;

  VectorField residual = u0;
  residual.to_spectral();

  for (int k = 0; k <= k_max; ++k) {
    // The second term keeps ||v0^(k)||_3 <= eps0/4^k reachable at depth;
    // the proof's per-step tolerance alone stops implying it from k = 3 on.
    const double tail_target =
        std::min(eps0 / std::pow(2.0, k + 4), eps0 / std::pow(4.0, k + 1));
    const double norm_bound = k == 0 ? 2.0 * eps0 : eps0 / std::pow(4.0, k);

    double delta = std::max(delta_start, delta_min);
    VectorField level(grid, Rep::spectral);
    VectorField next_residual(grid, Rep::spectral);
    bool met = false;
    while (true) {
      const auto mult = kernel_multiplier(delta, grid);
      level = residual;
      apply_multiplier(level, mult);
      next_residual = subtract(residual, level);
      const double tail = lp_norm(next_residual, 3.0, NormMode::magnitude);
      const double vnorm = lp_norm(level, 3.0, NormMode::magnitude);
      met = tail <= tail_target && vnorm <= norm_bound;
      if (met || delta * 0.5 < delta_min) break;
      delta *= 0.5;
    }
    if (!met) out.truncated = true;
    residual = next_residual;
    out.levels.push_back(std::move(level));
    out.tail_errors.push_back(lp_norm(residual, 3.0, NormMode::magnitude));
    out.deltas.push_back(delta);
  }
  return out;
}

VectorField make_test_field(const std::string& kind, double amplitude,
                            std::uint64_t seed, const GridPtr& grid) {
  if (amplitude <= 0.0) {
    throw std::invalid_argument("make_test_field: amplitude must be positive");
  }
  const GridSpec& g = grid->spec();
  const int n = g.n;
  const double h = g.spacing();

  if (kind == "taylor-green") {
    VectorField u(grid, Rep::physical);
    for (int iz = 0; iz < n; ++iz) {
      const double z = iz * h;
      for (int iy = 0; iy < n; ++iy) {
        const double y = iy * h;
        for (int ix = 0; ix < n; ++ix) {
          const double x = ix * h;
          const std::size_t i = g.phys_index(ix, iy, iz);
          u[0].phys()[i] = amplitude * std::sin(x) * std::cos(y) * std::cos(z);
          u[1].phys()[i] = -amplitude * std::cos(x) * std::sin(y) * std::cos(z);
          u[2].phys()[i] = 0.0;
        }
      }
    }
    return u;
  }

  if (kind == "single-mode") {
    VectorField u(grid, Rep::physical);
    for (int iz = 0; iz < n; ++iz) {
      for (int iy = 0; iy < n; ++iy) {
        const double y = iy * h;
        for (int ix = 0; ix < n; ++ix) {
          u[0].phys()[g.phys_index(ix, iy, iz)] = amplitude * std::sin(y);
        }
      }
    }
    return u;
  }

  if (kind != "random-band") {
    throw std::invalid_argument("make_test_field: unknown kind " + kind);
  }

  // Gaussian coefficients on |k|_inf <= 2, std exp(-1.5 |k|^2), keyed per
  // mode so the embedded field does not depend on the grid size. One
  // representative per Hermitian pair is drawn; the x >= 0 half-space is
  // the stored one, and kx = 0 modes write their conjugate partner too.
  constexpr int kBand = 2;
  constexpr double kDecay = 1.5;
  VectorField u(grid, Rep::spectral);
  const std::array<std::uint64_t, 2> key{seed, rng::kDomainField};
  std::uint64_t mode_index = 0;
  for (int kx = -kBand; kx <= kBand; ++kx) {
    for (int ky = -kBand; ky <= kBand; ++ky) {
      for (int kz = -kBand; kz <= kBand; ++kz, ++mode_index) {
        const bool rep = kx > 0 || (kx == 0 && ky > 0) ||
                         (kx == 0 && ky == 0 && kz > 0);
        if (!rep) continue;
        const double k2 = static_cast<double>(kx * kx + ky * ky + kz * kz);
        const double std_dev = std::exp(-kDecay * k2);
        const int iy = ky >= 0 ? ky : ky + n;
        const int iz = kz >= 0 ? kz : kz + n;
        for (int c = 0; c < 3; ++c) {
          const auto z = rng::normal_pair(key, {mode_index, static_cast<std::uint64_t>(c), 0, 0});
          const std::complex<double> coeff{std_dev * z[0], std_dev * z[1]};
          u[c].spectral()[g.spec_index(kx, iy, iz)] = coeff;
          if (kx == 0) {
            const int jy = ky == 0 ? 0 : n - iy;
            const int jz = kz == 0 ? 0 : n - iz;
            u[c].spectral()[g.spec_index(0, jy, jz)] = std::conj(coeff);
          }
        }
      }
    }
  }
  VectorField proj = leray_project(u);
  const double norm = lp_norm(proj, 3.0, NormMode::magnitude);
  if (norm == 0.0) throw std::runtime_error("make_test_field: degenerate draw");
  const double scale = amplitude / norm;
  for (int j = 0; j < 3; ++j) {
    for (auto& cval : proj[j].spectral()) cval *= scale;
  }
  return proj;
}

VectorField make_initial_condition(const std::string& kind, double eps0,
                                   std::uint64_t seed, const GridPtr& grid) {
  VectorField u0 = make_test_field(kind, eps0, seed, grid);
  const double n3 = lp_norm(u0, 3.0, NormMode::magnitude);
  if (n3 > 0.0 && eps0 > 0.0) {
    u0.to_spectral();
    const double scale = eps0 / n3;
    for (int j = 0; j < 3; ++j) {
      for (auto& c : u0[j].spectral()) c *= scale;
    }
  }
  return u0;
}

}  // namespace snse
