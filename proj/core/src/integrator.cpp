#include "snse/integrator.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "snse/fft.hpp"
#include "snse/norms.hpp"
#include "snse/spectral.hpp"

namespace snse {
namespace {

// exp(-|k|^2 dt) per stored mode. |k|^2 is a small integer, so a lookup
// table over k^2 values backs each (n, dt) pair; cached under a mutex.
std::shared_ptr<const std::vector<double>> heat_multiplier(const GridSpec& g,
                                                           double dt) {
  static std::mutex mu;
  static std::map<std::pair<int, double>, std::shared_ptr<const std::vector<double>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({g.n, dt});
  if (it != cache.end()) return it->second;

  const int half = g.n / 2;
  const int k2_max = 3 * half * half;
  std::vector<double> table(k2_max + 1);
  for (int j = 0; j <= k2_max; ++j) table[j] = std::exp(-j * dt);

  auto mult = std::make_shared<std::vector<double>>(g.spec_size());
  for (int iz = 0; iz < g.n; ++iz) {
    const int kz = g.wavenumber(iz);
    for (int iy = 0; iy < g.n; ++iy) {
      const int ky = g.wavenumber(iy);
      for (int ikx = 0; ikx < g.nc(); ++ikx) {
        (*mult)[g.spec_index(ikx, iy, iz)] =
            table[ikx * ikx + ky * ky + kz * kz];
      }
    }
  }
  cache.emplace(std::make_pair(g.n, dt), mult);
  return cache[{g.n, dt}];
}

void scale_by(VectorField& u, const std::vector<double>& mult) {
  for (int j = 0; j < 3; ++j) {
    auto& s = u[j].spectral();
    for (std::size_t i = 0; i < s.size(); ++i) s[i] *= mult[i];
  }
}

// Assembles P(sum_i i k_i T_ij_hat) from the six unique entries of a
// symmetric physical tensor, masking the output: products of 2/3-band
// inputs alias only into masked modes.
VectorField divergence_of_symmetric(const GridPtr& grid,
                                    const std::array<std::vector<double>, 6>& tensor) {
  const GridSpec& g = grid->spec();
  // Index pairs: (0,0),(1,1),(2,2),(0,1),(0,2),(1,2).
  std::array<std::vector<std::complex<double>>, 6> that;
  for (int e = 0; e < 6; ++e) {
    that[e].resize(g.spec_size());
    fft::forward(g, tensor[e].data(), that[e].data());
  }
  auto entry = [&](int i, int j) -> const std::vector<std::complex<double>>& {
    if (i == j) return that[i];
    const int a = std::min(i, j), b = std::max(i, j);
    if (a == 0 && b == 1) return that[3];
    if (a == 0 && b == 2) return that[4];
    return that[5];
  };
  VectorField out(grid, Rep::spectral);
  const auto& mask = grid->dealias_mask();
  const std::complex<double> I{0.0, 1.0};
  for (int iz = 0; iz < g.n; ++iz) {
    const double kz = g.wavenumber(iz);
    for (int iy = 0; iy < g.n; ++iy) {
      const double ky = g.wavenumber(iy);
      for (int ikx = 0; ikx < g.nc(); ++ikx) {
        const std::size_t idx = g.spec_index(ikx, iy, iz);
        if (!mask[idx]) continue;
        const double kv[3] = {static_cast<double>(ikx), ky, kz};
        for (int j = 0; j < 3; ++j) {
          std::complex<double> acc{0.0, 0.0};
          for (int i = 0; i < 3; ++i) acc += kv[i] * entry(i, j)[idx];
          out[j].spectral()[idx] = I * acc;
        }
      }
    }
  }
  return leray_project(out);
}

constexpr int kPairI[6] = {0, 1, 2, 0, 0, 1};
constexpr int kPairJ[6] = {0, 1, 2, 1, 2, 2};

// Product assembly from physical samples. Inputs must be alias-safe: either
// pre-dealiased or exactly band-limited to the 2/3 mask, so the cascade can
// hand over its diagnostics copies without a second transform pass.
VectorField advection_phys(const VectorField& up) {
  const GridSpec& g = up.spec();
  std::array<std::vector<double>, 6> tensor;
  for (int e = 0; e < 6; ++e) {
    tensor[e].resize(g.phys_size());
    const auto& a = up[kPairI[e]].phys();
    const auto& b = up[kPairJ[e]].phys();
    for (std::size_t i = 0; i < tensor[e].size(); ++i) tensor[e][i] = a[i] * b[i];
  }
  return divergence_of_symmetric(up.grid_ptr(), tensor);
}

VectorField advection_pair_phys(const VectorField& a, const VectorField& b) {
  const GridSpec& g = a.spec();
  std::array<std::vector<double>, 6> tensor;
  for (int e = 0; e < 6; ++e) {
    tensor[e].resize(g.phys_size());
    const auto& ai = a[kPairI[e]].phys();
    const auto& aj = a[kPairJ[e]].phys();
    const auto& bi = b[kPairI[e]].phys();
    const auto& bj = b[kPairJ[e]].phys();
    for (std::size_t i = 0; i < tensor[e].size(); ++i) {
      tensor[e][i] = ai[i] * bj[i] + bi[i] * aj[i];
    }
  }
  return divergence_of_symmetric(a.grid_ptr(), tensor);
}

}  // namespace

VectorField advection(const VectorField& u) {
  VectorField d = dealias(u);
  d.to_physical();
  return advection_phys(d);
}

VectorField advection_pair(const VectorField& a, const VectorField& b) {
  VectorField ad = dealias(a);
  VectorField bd = dealias(b);
  ad.to_physical();
  bd.to_physical();
  return advection_pair_phys(ad, bd);
}

VectorField heat_step(const VectorField& u, double dt, const FluxForcing* f,
                      const std::vector<VectorField>* g,
                      const std::vector<double>* draws) {
  if (dt <= 0.0) throw std::invalid_argument("heat_step: dt must be positive");
  VectorField out = u;
  out.to_spectral();
  if (!out.finite()) throw BlowUpError("heat_step: non-finite state");

  if (f) {
    for (int j = 0; j < 3; ++j) {
      ScalarField div_fj = divergence((*f)[j]);
      auto& s = out[j].spectral();
      const auto& d = div_fj.spectral();
      for (std::size_t i = 0; i < s.size(); ++i) s[i] += dt * d[i];
    }
  }
  if (g) {
    if (!draws || draws->size() != g->size()) {
      throw std::invalid_argument("heat_step: noise terms need matching draws");
    }
    for (std::size_t m = 0; m < g->size(); ++m) {
      VectorField gm = (*g)[m];
      gm.to_spectral();
      out.axpy((*draws)[m], gm);
    }
  }
  scale_by(out, *heat_multiplier(out.spec(), dt));
  return out;
}

VectorField snse_step(const VectorField& u, const NoiseBasis& basis,
                      const std::vector<double>& draws, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("snse_step: dt must be positive");
  VectorField us = u;
  us.to_spectral();
  {
    VectorField check = us;
    check.to_physical();
    if (!check.finite() ||
        lp_norm(check, std::numeric_limits<double>::infinity(),
                NormMode::magnitude) > kBlowUpGuard) {
      throw BlowUpError("snse_step: blow-up guard tripped");
    }
  }
  VectorField nonlin = advection(us);  // P(div(u (x) u)) = P(u.grad u)
  VectorField noise = sigma_weighted_sum(basis, us, draws);
  VectorField out = us;
  out.axpy(-dt, nonlin);
  out.axpy(1.0, noise);
  scale_by(out, *heat_multiplier(out.spec(), dt));
  return out;
}

CascadeState::CascadeState(const DecompositionResult& d, CutoffParams params)
    : params_(std::move(params)) {
  if (d.levels.empty()) throw std::invalid_argument("cascade: no levels");
  if (params_.level_caps.size() < d.levels.size()) {
    throw std::invalid_argument("cascade: missing level caps");
  }
  std::string why;
  if (!params_.valid(&why)) throw std::invalid_argument("cascade: " + why);
  for (const auto& v : d.levels) {
    VectorField lv = v;
    lv.to_spectral();
    levels_.push_back(lv);
    if (sums_.empty()) {
      sums_.push_back(lv);
    } else {
      VectorField s = sums_.back();
      s.axpy(1.0, lv);
      sums_.push_back(std::move(s));
    }
  }
  series_.resize(levels_.size());

  const auto& mask = levels_[0].grid().dealias_mask();
  band_limited_ = true;
  for (const auto& lv : levels_) {
    for (int j = 0; j < 3 && band_limited_; ++j) {
      const auto& s = lv[j].spectral();
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (!mask[i] && (s[i].real() != 0.0 || s[i].imag() != 0.0)) {
          band_limited_ = false;
          break;
        }
      }
    }
  }
}

double CascadeState::verify_partial_sums() const {
  double worst = 0.0;
  VectorField acc(levels_[0].grid_ptr(), Rep::spectral);
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    acc.axpy(1.0, levels_[k]);
    for (int j = 0; j < 3; ++j) {
      const auto& a = acc[j].spectral();
      const auto& b = sums_[k][j].spectral();
      for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
      }
    }
  }
  return worst;
}

VectorField cascade_sum(const CascadeState& state) {
  return state.partial_sum(state.k_max());
}

void append_terminal_samples(CascadeState& state, bool sample_dissipation) {
  const int K = state.k_max();
  std::vector<double> psis(K + 1);
  std::vector<LevelSample> fin(K + 1);
  for (int k = 0; k <= K; ++k) {
    VectorField vp = state.level(k);
    vp.to_physical();
    LevelSample& s = fin[k];
    s.t = state.t();
    s.norm3 = lp_norm(vp, 3.0, NormMode::magnitude);
    s.norm6 = lp_norm(vp, 6.0, NormMode::magnitude);
    s.dissip3 = sample_dissipation ? dissipation_sum(vp, 3) : 0.0;
    s.dissip6 = sample_dissipation ? dissipation_sum(vp, 6) : 0.0;
    psis[k] = psi_from_norm(s.norm6, state.params().level_caps[k]);
    s.psi = psis[k];
    s.phi = phi_from_norm(s.norm3, k, state.params().eps_bar);
  }
  for (int k = 0; k <= K; ++k) {
    fin[k].zeta = zeta(psis, k);
    state.series()[k].push_back(fin[k]);
  }
}

namespace {

struct LevelScan {
  VectorField phys;  // physical copy of the level
  LevelSample sample;
  LevelScan(const GridPtr& g) : phys(g, Rep::physical) {}
};

}  // namespace

StepReport cascade_step(CascadeState& state, const NoiseBasis& basis,
                        const std::vector<double>& draws, double dt,
                        const CascadeOptions& opts) {
  if (dt <= 0.0) throw std::invalid_argument("cascade_step: dt must be positive");
  const int K = state.k_max();
  const GridPtr& grid = state.levels_[0].grid_ptr();
  const GridSpec& g = grid->spec();
  const auto heat = heat_multiplier(g, dt);

  // Start-of-step diagnostics, cutoffs, and blow-up guard per level. Band-
  // limited levels let the same physical copies feed the product assembly.
  const bool reuse_phys = state.band_limited_;
  std::vector<LevelSample> pre(K + 1);
  std::vector<double> psis(K + 1), phis(K + 1), zetas(K + 1);
  std::vector<VectorField> phys;
  if (reuse_phys) phys.reserve(K + 1);
  for (int k = 0; k <= K; ++k) {
    VectorField vp(grid, Rep::physical);
    for (int j = 0; j < 3; ++j) {
      fft::inverse(g, state.levels_[k][j].spectral().data(), vp[j].phys().data());
    }
    if (!vp.finite() ||
        lp_norm(vp, std::numeric_limits<double>::infinity(), NormMode::magnitude) >
            kBlowUpGuard) {
      throw BlowUpError("cascade_step: blow-up guard tripped at level " +
                        std::to_string(k));
    }
    LevelSample& s = pre[k];
    s.t = state.t_;
    s.norm3 = lp_norm(vp, 3.0, NormMode::magnitude);
    s.norm6 = lp_norm(vp, 6.0, NormMode::magnitude);
    s.dissip3 = opts.sample_dissipation ? dissipation_sum(vp, 3) : 0.0;
    s.dissip6 = opts.sample_dissipation ? dissipation_sum(vp, 6) : 0.0;
    psis[k] = psi_from_norm(s.norm6, state.params_.level_caps[k]);
    phis[k] = phi_from_norm(s.norm3, k, state.params_.eps_bar);
    s.psi = psis[k];
    s.phi = phis[k];
    if (reuse_phys) phys.push_back(std::move(vp));
  }
  for (int k = 0; k <= K; ++k) {
    pre[k].zeta = zeta(psis, k);
    zetas[k] = pre[k].zeta;
  }

  // Start-of-step noise couplings: sigma applied to the old partial sums
  // (left-point Ito rule); level k receives sigma(u^k) - sigma(u^{k-1}).
  std::vector<VectorField> sigma_sums;
  sigma_sums.reserve(K + 1);
  for (int k = 0; k <= K; ++k) {
    sigma_sums.push_back(sigma_weighted_sum(basis, state.sums_[k], draws));
  }

  std::vector<VectorField> new_levels;
  new_levels.reserve(K + 1);
  VectorField new_lower(grid, Rep::spectral);  // sum of already-updated levels

  for (int k = 0; k <= K; ++k) {
    const double c2 = psis[k] * psis[k] * phis[k] * phis[k];
    const double zl = zetas[k];
    const VectorField& v_old = state.levels_[k];

    VectorField next = v_old;
    if (c2 > 0.0) {
      VectorField drift = reuse_phys ? advection_phys(phys[k]) : advection(v_old);
      if (k > 0 && zl > 0.0) {
        const VectorField& lower =
            opts.coupling == CascadeOptions::LowerCoupling::updated
                ? new_lower
                : state.sums_[k - 1];
        if (reuse_phys) {
          VectorField lp(grid, Rep::physical);
          for (int j = 0; j < 3; ++j) {
            fft::inverse(g, lower[j].spectral().data(), lp[j].phys().data());
          }
          drift.axpy(zl, advection_pair_phys(lp, phys[k]));
        } else {
          drift.axpy(zl, advection_pair(lower, v_old));
        }
      }
      next.axpy(-dt * c2, drift);

      VectorField noise = sigma_sums[k];
      if (k > 0) noise.axpy(-1.0, sigma_sums[k - 1]);
      next.axpy(c2 * zl, noise);
    }
    scale_by(next, *heat);
    new_lower.axpy(1.0, next);
    new_levels.push_back(std::move(next));
  }

  state.levels_ = std::move(new_levels);
  for (int k = 0; k <= K; ++k) {
    if (k == 0) {
      state.sums_[0] = state.levels_[0];
    } else {
      state.sums_[k] = state.sums_[k - 1];
      state.sums_[k].axpy(1.0, state.levels_[k]);
    }
  }

  if (opts.record_series) {
    for (int k = 0; k <= K; ++k) state.series_[k].push_back(pre[k]);
  }
  StepReport rep;
  rep.dt = dt;
  rep.step = state.step_;
  rep.pre = std::move(pre);
  state.t_ += dt;
  ++state.step_;
  return rep;
}

ResidualStudy residual_vs_direct(const DecompositionResult& d,
                                 const CutoffParams& params,
                                 const NoiseBasis& basis, double dt, int steps,
                                 std::uint64_t seed, std::uint64_t realization,
                                 const CascadeOptions& opts) {
  CascadeState state(d, params);
  VectorField direct = cascade_sum(state);

  ResidualStudy study;
  for (int s = 0; s < steps; ++s) {
    const auto inc = sample_increments(seed, realization, s, dt, basis.mode_count);
    try {
      cascade_step(state, basis, inc.draws, dt, opts);
      direct = snse_step(direct, basis, inc.draws, dt);
    } catch (const BlowUpError&) {
      study.truncated = true;
      break;
    }
    VectorField diff = cascade_sum(state);
    diff.axpy(-1.0, direct);
    const double r = lp_norm(diff, 3.0, NormMode::magnitude);
    study.times.push_back(state.t());
    study.residual3.push_back(r);
    study.max_residual = std::max(study.max_residual, r);
  }
  return study;
}

PicardResult picard_solve(const VectorField& v0, const PicardContext& ctx,
                          const NoiseBasis& basis, double dt, double t_star,
                          int max_iters, std::uint64_t seed,
                          std::uint64_t realization) {
  if (max_iters < 1) throw std::invalid_argument("picard: max_iters must be >= 1");
  const int steps = static_cast<int>(std::llround(t_star / dt));
  if (steps < 1) throw std::invalid_argument("picard: t_star shorter than dt");
  if (!ctx.w.empty() && static_cast<int>(ctx.w.size()) != steps + 1) {
    throw std::invalid_argument("picard: frozen trajectory length mismatch");
  }
  const GridPtr& grid = v0.grid_ptr();
  const auto heat = heat_multiplier(grid->spec(), dt);

  VectorField v0s = v0;
  v0s.to_spectral();

  // V^(-1) = 0 trajectory.
  std::vector<VectorField> prev(steps + 1, VectorField(grid, Rep::spectral));

  PicardResult res;
  const double pow2k = std::pow(2.0, ctx.k);

  for (int j = 0; j < max_iters; ++j) {
    std::vector<VectorField> cur;
    cur.reserve(steps + 1);
    cur.push_back(v0s);
    for (int s = 0; s < steps; ++s) {
      const VectorField& prev_s = prev[s];
      const VectorField& cur_s = cur.back();

      // EQ-style coefficient: theta factors of the current and the previous
      // iterate, both at the step start.
      const double n6c = lp_norm(cur_s, 6.0, NormMode::magnitude);
      const double n3c = lp_norm(cur_s, 3.0, NormMode::magnitude);
      const double n6p = lp_norm(prev_s, 6.0, NormMode::magnitude);
      const double n3p = lp_norm(prev_s, 3.0, NormMode::magnitude);
      const double coef = theta(n6c / ctx.cap) * theta(n6p / ctx.cap) *
                          theta(pow2k * n3c / ctx.eps_bar) *
                          theta(pow2k * n3p / ctx.eps_bar);

      const auto inc = sample_increments(seed, realization, s, dt, basis.mode_count);
      VectorField next = cur_s;
      if (coef > 0.0) {
        const double zl = ctx.zeta.empty() ? 1.0 : ctx.zeta[s];
        VectorField drift = advection(prev_s);
        if (!ctx.w.empty() && zl > 0.0) {
          VectorField mixed = advection_pair(ctx.w[s], prev_s);
          drift.axpy(zl, mixed);
        }
        next.axpy(-dt * coef, drift);

        // sigma(V^(j-1) + w) - sigma(w), evaluated literally.
        VectorField noise(grid, Rep::spectral);
        if (ctx.w.empty()) {
          noise = sigma_weighted_sum(basis, prev_s, inc.draws);
        } else {
          VectorField vw = prev_s;
          vw.axpy(1.0, ctx.w[s]);
          noise = sigma_weighted_sum(basis, vw, inc.draws);
          noise.axpy(-1.0, sigma_weighted_sum(basis, ctx.w[s], inc.draws));
        }
        next.axpy(coef * zl, noise);
      }
      scale_by(next, *heat);
      cur.push_back(std::move(next));
    }

    if (j >= 1) {
      double dj = 0.0;
      for (int s = 0; s <= steps; ++s) {
        VectorField diff = cur[s];
        diff.axpy(-1.0, prev[s]);
        dj = std::max(dj, lp_norm(diff, 6.0, NormMode::magnitude));
      }
      if (!res.diffs.empty() && dj > res.diffs.back()) res.nonmonotone = true;
      res.diffs.push_back(dj);
    }
    prev = std::move(cur);
  }
  res.trajectory = std::move(prev);
  return res;
}

}  // namespace snse
