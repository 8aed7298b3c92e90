#include "snse/noise.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

#include "snse/norms.hpp"
#include "snse/rng.hpp"
#include "snse/spectral.hpp"

namespace snse {
namespace {

// Golden-ratio rotations: three irrational fractions keep the per-mode
// kernel shifts from ever aligning across modes.
constexpr double kGold[3] = {0.6180339887498949, 0.3819660112501051,
                             0.7548776662466927};

// Per-axis multiplier of rho_m: 1 at k = 0, e^{-+ i alpha}/2 at k = +-1,
// 0 beyond.
inline std::complex<double> axis_factor(int k, double alpha) {
  if (k == 0) return {1.0, 0.0};
  if (k == 1) return std::polar(0.5, -alpha);
  if (k == -1) return std::polar(0.5, alpha);
  return {0.0, 0.0};
}

// Leray + mean-zero projection of a single stored mode, in place.
inline void project_slot(int kx, int ky, int kz, std::size_t i, VectorField& u) {
  const double ksq = static_cast<double>(kx) * kx +
                     static_cast<double>(ky) * ky +
                     static_cast<double>(kz) * kz;
  if (ksq == 0.0) {
    for (int c = 0; c < 3; ++c) u[c].spectral()[i] = 0.0;
    return;
  }
  const std::complex<double> kd =
      (static_cast<double>(kx) * u[0].spectral()[i] +
       static_cast<double>(ky) * u[1].spectral()[i] +
       static_cast<double>(kz) * u[2].spectral()[i]) / ksq;
  u[0].spectral()[i] -= static_cast<double>(kx) * kd;
  u[1].spectral()[i] -= static_cast<double>(ky) * kd;
  u[2].spectral()[i] -= static_cast<double>(kz) * kd;
}

// Applies eps * c_m * multiplier_m to u (spectral), then the projection.
// The multiplier vanishes beyond |k_j| <= 1, so only the 18 stored slots of
// that box are touched; the projection is diagonal in k and preserves the
// zeros outside it.
VectorField apply_mode(const NoiseBasis& basis, int m, const VectorField& u) {
  VectorField out(u.grid_ptr(), Rep::spectral);
  const GridSpec& g = u.spec();
  const int n = g.n;
  const double scale = basis.eps_sigma * basis.weights[m];
  const auto& alpha = basis.shifts[m];
  for (int kz = -1; kz <= 1; ++kz) {
    const int iz = kz >= 0 ? kz : kz + n;
    const auto fz = axis_factor(kz, alpha[2]);
    for (int ky = -1; ky <= 1; ++ky) {
      const int iy = ky >= 0 ? ky : ky + n;
      const auto fy = axis_factor(ky, alpha[1]);
      for (int kx = 0; kx <= 1; ++kx) {
        const auto f = scale * axis_factor(kx, alpha[0]) * fy * fz;
        const std::size_t i = g.spec_index(kx, iy, iz);
        for (int c = 0; c < 3; ++c) {
          out[c].spectral()[i] = f * u[c].spectral()[i];
        }
        project_slot(kx, ky, kz, i, out);
      }
    }
  }
  return out;
}

}  // namespace

double NoiseBasis::weight_tail_sq(int from_mode) const {
  double s = 0.0;
  for (std::size_t m = from_mode; m < weights.size(); ++m) s += weights[m] * weights[m];
  return s;
}

NoiseBasis make_noise_basis(int mode_count, double eps_sigma) {
  if (mode_count < 1) throw std::invalid_argument("noise: mode_count must be >= 1");
  // 0 is the switched-off operator (sigma = 0), used by deterministic
  // control runs; configs still demand (0, 1].
  if (eps_sigma < 0.0 || eps_sigma > 1.0) {
    throw std::invalid_argument("noise: eps_sigma must lie in [0, 1]");
  }
  NoiseBasis b;
  b.mode_count = mode_count;
  b.eps_sigma = eps_sigma;
  double s = 0.0;
  for (int m = 1; m <= mode_count; ++m) s += 1.0 / (static_cast<double>(m) * m);
  const double norm = 1.0 / std::sqrt(s);
  for (int m = 1; m <= mode_count; ++m) {
    b.weights.push_back(norm / static_cast<double>(m));
    std::array<double, 3> alpha;
    for (int j = 0; j < 3; ++j) {
      const double frac = m * kGold[j] - std::floor(m * kGold[j]);
      alpha[j] = kTwoPi * frac;
    }
    b.shifts.push_back(alpha);
  }
  return b;
}

ScalarField shape_kernel(const NoiseBasis& basis, int m, const GridPtr& grid) {
  if (m < 0 || m >= basis.mode_count) throw std::invalid_argument("noise: bad mode");
  const GridSpec& g = grid->spec();
  ScalarField k(grid, Rep::physical);
  const auto& alpha = basis.shifts[m];
  const double h = g.spacing();
  const double inv_vol = 1.0 / (kTwoPi * kTwoPi * kTwoPi);
  for (int iz = 0; iz < g.n; ++iz) {
    for (int iy = 0; iy < g.n; ++iy) {
      for (int ix = 0; ix < g.n; ++ix) {
        const double v = (1.0 + std::cos(ix * h - alpha[0])) *
                         (1.0 + std::cos(iy * h - alpha[1])) *
                         (1.0 + std::cos(iz * h - alpha[2]));
        k.phys()[g.phys_index(ix, iy, iz)] = v * inv_vol;
      }
    }
  }
  return k;
}

WienerIncrements sample_increments(std::uint64_t seed, std::uint64_t realization,
                                   std::uint64_t step, double dt, int mode_count) {
  if (dt <= 0.0) throw std::invalid_argument("noise: dt must be positive");
  WienerIncrements w;
  w.step = static_cast<int>(step);
  w.dt = dt;
  w.draws.resize(mode_count);
  const std::array<std::uint64_t, 2> key{seed, rng::kDomainWiener};
  const double root_dt = std::sqrt(dt);
  for (int m = 0; m < mode_count; ++m) {
    const auto z = rng::normal_pair(key, {realization, step, static_cast<std::uint64_t>(m), 0});
    w.draws[m] = root_dt * z[0];
  }
  return w;
}

std::vector<VectorField> sigma_apply(const NoiseBasis& basis, double /*t*/,
                                     const VectorField& u) {
  VectorField us = u;
  us.to_spectral();
  std::vector<VectorField> out;
  out.reserve(basis.mode_count);
  for (int m = 0; m < basis.mode_count; ++m) out.push_back(apply_mode(basis, m, us));
  return out;
}

VectorField sigma_apply_mode(const NoiseBasis& basis, int m, const VectorField& u) {
  if (m < 0 || m >= basis.mode_count) throw std::invalid_argument("noise: bad mode");
  VectorField us = u;
  us.to_spectral();
  return apply_mode(basis, m, us);
}

VectorField sigma_weighted_sum(const NoiseBasis& basis, const VectorField& u,
                               const std::vector<double>& draws) {
  if (static_cast<int>(draws.size()) != basis.mode_count) {
    throw std::invalid_argument("noise: draw count mismatch");
  }
  const VectorField* up = &u;
  std::optional<VectorField> copy;
  if (u.rep() != Rep::spectral) {
    copy.emplace(u);
    copy->to_spectral();
    up = &*copy;
  }
  VectorField acc(u.grid_ptr(), Rep::spectral);
  const GridSpec& g = u.spec();
  const int n = g.n;
  // The per-mode multipliers share one support box, so the whole sum
  // collapses to a single 18-slot multiplier with the draws folded in.
  for (int kz = -1; kz <= 1; ++kz) {
    const int iz = kz >= 0 ? kz : kz + n;
    for (int ky = -1; ky <= 1; ++ky) {
      const int iy = ky >= 0 ? ky : ky + n;
      for (int kx = 0; kx <= 1; ++kx) {
        std::complex<double> f{0.0, 0.0};
        for (int m = 0; m < basis.mode_count; ++m) {
          const auto& alpha = basis.shifts[m];
          f += draws[m] * basis.eps_sigma * basis.weights[m] *
               axis_factor(kx, alpha[0]) * axis_factor(ky, alpha[1]) *
               axis_factor(kz, alpha[2]);
        }
        const std::size_t i = g.spec_index(kx, iy, iz);
        for (int c = 0; c < 3; ++c) {
          acc[c].spectral()[i] = f * (*up)[c].spectral()[i];
        }
        project_slot(kx, ky, kz, i, acc);
      }
    }
  }
  return acc;
}

LipschitzReport lipschitz_report(
    const NoiseBasis& basis,
    const std::vector<std::pair<VectorField, VectorField>>& corpus, double p) {
  if (corpus.empty()) throw std::invalid_argument("lipschitz_report: empty corpus");
  LipschitzReport rep;
  for (const auto& [u1, u2] : corpus) {
    VectorField diff = u1;
    diff.to_spectral();
    VectorField v2 = u2;
    v2.to_spectral();
    diff.axpy(-1.0, v2);
    const double den = lp_norm(diff, p, NormMode::magnitude);
    if (den == 0.0) {
      ++rep.pairs_skipped;
      continue;
    }
    const auto s1 = sigma_apply(basis, 0.0, u1);
    const auto s2 = sigma_apply(basis, 0.0, u2);
    double num_sq = 0.0;
    for (int m = 0; m < basis.mode_count; ++m) {
      VectorField d = s1[m];
      d.axpy(-1.0, s2[m]);
      const double nm = lp_norm(d, p, NormMode::magnitude);
      num_sq += nm * nm;
    }
    rep.max_ratio = std::max(rep.max_ratio, std::sqrt(num_sq) / den);
    ++rep.pairs_used;
  }
  return rep;
}

}  // namespace snse
