#include "verify.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "snse/config.hpp"
#include "snse/cutoffs.hpp"
#include "snse/ensemble.hpp"
#include "snse/fft.hpp"
#include "snse/field.hpp"
#include "snse/initial_data.hpp"
#include "snse/integrator.hpp"
#include "snse/noise.hpp"
#include "snse/norms.hpp"
#include "snse/rng.hpp"
#include "snse/snapshot.hpp"
#include "snse/spectral.hpp"
#include "snse/stopping.hpp"

namespace {

using namespace snse;

struct Suite {
  bool quiet = false;
  int failures = 0;

  // A check passes when |measured| <= bound.
  void check(const std::string& name, double measured, double bound) {
    const bool ok = measured <= bound;
    if (!ok) ++failures;
    if (!ok || !quiet) {
      std::printf("%s %-38s measured=%.3e bound=%.3e\n", ok ? "PASS" : "FAIL",
                  name.c_str(), measured, bound);
    }
  }
  void check_true(const std::string& name, bool ok, const std::string& detail) {
    if (!ok) ++failures;
    if (!ok || !quiet) {
      std::printf("%s %-38s %s\n", ok ? "PASS" : "FAIL", name.c_str(),
                  detail.c_str());
    }
  }
};

double max_spec_abs(const VectorField& u) {
  double m = 0.0;
  for (int j = 0; j < 3; ++j) {
    for (const auto& c : u[j].spectral()) m = std::max(m, std::abs(c));
  }
  return m;
}

double max_spec_diff(const VectorField& a, const VectorField& b) {
  double m = 0.0;
  for (int j = 0; j < 3; ++j) {
    const auto& x = a[j].spectral();
    const auto& y = b[j].spectral();
    for (std::size_t i = 0; i < x.size(); ++i) {
      m = std::max(m, std::abs(x[i] - y[i]));
    }
  }
  return m;
}

void spectral_suite(Suite& s) {
  GridPtr grid = make_grid(16);
  const GridSpec& g = grid->spec();

  double idem = 0.0, divn = 0.0, sym = 0.0, annih = 0.0;
  for (int t = 0; t < 8; ++t) {
    VectorField u = make_test_field("random-band", 1.0, 100 + t, grid);
    VectorField pu = leray_project(u);
    VectorField ppu = leray_project(pu);
    idem = std::max(idem, max_spec_diff(ppu, pu) / std::max(1e-300, max_spec_abs(pu)));

    VectorField pp = pu;
    pp.to_physical();
    double sup = lp_norm(pp, std::numeric_limits<double>::infinity(),
                         NormMode::magnitude);
    ScalarField dv = divergence(pu);
    double dmax = 0.0;
    for (const auto& c : dv.spectral()) dmax = std::max(dmax, std::abs(c));
    divn = std::max(divn, dmax / std::max(1e-300, sup));

    // Symmetry through the inner product: (Pu, w) = (u, Pw).
    VectorField w = make_test_field("random-band", 1.0, 200 + t, grid);
    VectorField pw = leray_project(w);
    std::complex<double> a{0, 0}, b{0, 0};
    for (int j = 0; j < 3; ++j) {
      const auto& x1 = pu[j].spectral();
      const auto& y1 = w[j].spectral();
      const auto& x2 = u[j].spectral();
      const auto& y2 = pw[j].spectral();
      for (std::size_t i = 0; i < x1.size(); ++i) {
        a += x1[i] * std::conj(y1[i]);
        b += x2[i] * std::conj(y2[i]);
      }
    }
    sym = std::max(sym, std::abs(a - b) / std::max(1e-300, std::abs(a)));

    ScalarField scal(grid, Rep::spectral);
    scal.spectral() = u[0].spectral();
    VectorField grads = gradient(scal);
    annih = std::max(annih, max_spec_abs(leray_project(grads)) /
                                std::max(1e-300, max_spec_abs(grads)));
  }
  s.check("projector.idempotent", idem, 1e-12);
  s.check("projector.divergence_free", divn, 1e-12);
  s.check("projector.symmetric", sym, 1e-10);
  s.check("projector.annihilates_gradients", annih, 1e-12);

  // Quadrature: sin(x2) has exact trig L^2 norm; the L^3 norm of |sin| has
  // a kink so only quadrature accuracy is expected at n=16.
  ScalarField f(grid, Rep::physical);
  for (int iz = 0; iz < g.n; ++iz) {
    for (int iy = 0; iy < g.n; ++iy) {
      for (int ix = 0; ix < g.n; ++ix) {
        f.phys()[g.phys_index(ix, iy, iz)] = std::sin(iy * g.spacing());
      }
    }
  }
  const double n2 = lp_norm(f, 2.0);
  const double n3 = lp_norm(f, 3.0);
  const double ref2 = std::pow(kTwoPi, 1.5) / std::sqrt(2.0);
  const double ref3 = std::pow(kTwoPi * kTwoPi * 8.0 / 3.0, 1.0 / 3.0);
  s.check("norms.sin_l2_exact", std::abs(n2 - ref2) / ref2, 1e-12);
  s.check("norms.sin_l3_quadrature", std::abs(n3 - ref3) / ref3, 2e-4);

  // Forward normalization: a sin(x1) has spectral coefficient -i a/2 at
  // k = (1,0,0).
  ScalarField m(grid, Rep::physical);
  for (int iz = 0; iz < g.n; ++iz) {
    for (int iy = 0; iy < g.n; ++iy) {
      for (int ix = 0; ix < g.n; ++ix) {
        m.phys()[g.phys_index(ix, iy, iz)] = 3.0 * std::sin(ix * g.spacing());
      }
    }
  }
  ScalarField ms = transform(m, Rep::spectral);
  const std::complex<double> c = ms.spectral()[g.spec_index(1, 0, 0)];
  s.check("fft.forward_normalization",
          std::abs(c - std::complex<double>{0.0, -1.5}), 1e-13);
  ScalarField back = transform(ms, Rep::physical);
  double rt = 0.0;
  for (std::size_t i = 0; i < back.phys().size(); ++i) {
    rt = std::max(rt, std::abs(back.phys()[i] - m.phys()[i]));
  }
  s.check("fft.roundtrip", rt / 3.0, 1e-12);

  // Snapshot round trip, bitwise.
  VectorField u = make_test_field("random-band", 1.0, 7, grid);
  u.to_physical();
  const std::string path =
      (std::filesystem::temp_directory_path() / "snse_verify.snse").string();
  write_snapshot(path, u);
  VectorField r = read_snapshot_vector(path, grid);
  double sd = 0.0;
  for (int j = 0; j < 3; ++j) {
    for (std::size_t i = 0; i < u[j].phys().size(); ++i) {
      sd = std::max(sd, std::abs(u[j].phys()[i] - r[j].phys()[i]));
    }
  }
  std::filesystem::remove(path);
  s.check("snapshot.roundtrip_bitwise", sd, 0.0);
}

void initial_data_suite(Suite& s) {
  GridPtr grid = make_grid(16);
  const GridSpec& g = grid->spec();

  const double delta = 0.9;
  ScalarField ker = mollifier_kernel(delta, grid);
  double mass = 0.0, neg = 0.0, outside = 0.0;
  for (int iz = 0; iz < g.n; ++iz) {
    for (int iy = 0; iy < g.n; ++iy) {
      for (int ix = 0; ix < g.n; ++ix) {
        const double v = ker.phys()[g.phys_index(ix, iy, iz)];
        mass += v * g.cell_volume();
        neg = std::min(neg, v);
        auto wrap = [&](int i) {
          double x = i * g.spacing();
          return std::min(x, kTwoPi - x);
        };
        const double r = std::sqrt(wrap(ix) * wrap(ix) + wrap(iy) * wrap(iy) +
                                   wrap(iz) * wrap(iz));
        if (r > delta) outside = std::max(outside, std::abs(v));
      }
    }
  }
  s.check("mollifier.unit_mass", std::abs(mass - 1.0), 1e-10);
  s.check("mollifier.nonnegative", -neg, 0.0);
  s.check("mollifier.compact_support", outside, 1e-14);

  VectorField u = make_test_field("random-band", 0.5, 11, grid);
  VectorField mu = mollify(u, delta);
  const double ratio =
      lp_norm(mu, 3.0, NormMode::magnitude) / lp_norm(u, 3.0, NormMode::magnitude);
  s.check("mollifier.l3_contraction", ratio - 1.0, 1e-12);

  VectorField pm = leray_project(mollify(u, delta));
  VectorField mp = mollify(leray_project(u), delta);
  s.check("mollifier.commutes_with_projector",
          max_spec_diff(pm, mp) / std::max(1e-300, max_spec_abs(pm)), 1e-12);

  const double eps0 = 0.01;
  VectorField u0 = make_initial_condition("random-band", eps0, 21, grid);
  DecompositionResult d = decompose(u0, eps0, 4);
  double worst = 0.0;
  for (int k = 0; k <= 4; ++k) {
    const double n3k = lp_norm(d.levels[k], 3.0, NormMode::magnitude);
    const double bound = k == 0 ? 2.0 * eps0 : eps0 / std::pow(4.0, k);
    worst = std::max(worst, n3k - bound);
    worst = std::max(worst, d.tail_errors[k] - eps0 / std::pow(2.0, k + 3));
  }
  s.check("decompose.level_and_tail_bounds", worst, 1e-10);
}

void noise_suite(Suite& s) {
  GridPtr grid = make_grid(16);
  NoiseBasis basis = make_noise_basis(8, 0.1);

  VectorField zero(grid, Rep::spectral);
  double z = 0.0;
  for (const auto& out : sigma_apply(basis, 0.0, zero)) z = std::max(z, max_spec_abs(out));
  s.check("sigma.zero_maps_to_zero", z, 0.0);

  VectorField u = make_test_field("random-band", 1.0, 31, grid);
  VectorField u2 = u;
  u2.to_spectral();
  for (int j = 0; j < 3; ++j) {
    for (auto& c : u2[j].spectral()) c *= 2.0;
  }
  double lin = 0.0, divm = 0.0;
  for (int m = 0; m < basis.mode_count; ++m) {
    VectorField a = sigma_apply_mode(basis, m, u);
    VectorField b = sigma_apply_mode(basis, m, u2);
    VectorField twice = a;
    twice.axpy(1.0, a);
    lin = std::max(lin, max_spec_diff(b, twice) / std::max(1e-300, max_spec_abs(b)));
    ScalarField dv = divergence(a);
    for (const auto& c : dv.spectral()) divm = std::max(divm, std::abs(c));
  }
  s.check("sigma.linear", lin, 1e-14);
  s.check("sigma.divergence_free", divm / std::max(1e-300, max_spec_abs(u)), 1e-12);

  std::vector<std::pair<VectorField, VectorField>> corpus;
  for (int t = 0; t < 10; ++t) {
    corpus.emplace_back(make_test_field("random-band", 1.0, 500 + t, grid),
                        make_test_field("random-band", 0.7, 600 + t, grid));
  }
  LipschitzReport rep = lipschitz_report(basis, corpus, 3.0);
  s.check("sigma.lipschitz_leq_eps_sigma", rep.max_ratio,
          basis.eps_sigma * (1.0 + 1e-6));

  const double dt = 1e-3;
  const int draws = 10000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const auto inc = sample_increments(42, i, 0, dt, 1);
    sum += inc.draws[0];
    sq += inc.draws[0] * inc.draws[0];
  }
  const double var = sq / draws - (sum / draws) * (sum / draws);
  s.check("wiener.variance_matches_dt", std::abs(var / dt - 1.0), 0.05);
}

void cutoff_suite(Suite& s) {
  s.check("theta.plateau", std::abs(theta(0.5) - 1.0), 0.0);
  s.check("theta.support", std::abs(theta(3.0)), 0.0);
  const double mid = theta(1.5);
  s.check_true("theta.interior_strict", mid > 0.0 && mid < 1.0,
               "theta(1.5)=" + std::to_string(mid));
  double worst = 0.0;
  for (double x = 0.0; x <= 3.0 - 1e-3; x += 1e-3) {
    worst = std::max(worst, theta(x + 1e-3) - theta(x));
  }
  s.check("theta.nonincreasing", worst, 1e-12);

  std::vector<double> psis = {0.9, 0.8, 0.7};
  s.check("zeta.level0_is_one", std::abs(zeta(psis, 0) - 1.0), 0.0);
  s.check("zeta.products", std::abs(zeta(psis, 2) - 0.9 * 0.8), 1e-15);
}

void integrator_suite(Suite& s) {
  GridPtr grid = make_grid(16);
  const GridSpec& g = grid->spec();
  const double dt = 1e-3;

  // Pure heat: mode k=(0,1,0) decays by exactly exp(-dt) per step.
  VectorField u(grid, Rep::spectral);
  u.set_zero();
  u[0].spectral()[g.spec_index(0, 1, 0)] = std::complex<double>{0.0, -0.5};
  u[0].spectral()[g.spec_index(0, g.n - 1, 0)] = std::complex<double>{0.0, 0.5};
  double worst = 0.0;
  for (int step = 0; step < 10; ++step) {
    VectorField next = heat_step(u, dt);
    const auto before = u[0].spectral()[g.spec_index(0, 1, 0)];
    const auto after = next[0].spectral()[g.spec_index(0, 1, 0)];
    worst = std::max(worst, std::abs(after / before - std::exp(-dt)));
    u = next;
  }
  s.check("heat.exact_mode_decay", worst, 1e-14);

  // Deterministic re-run of a short cascade, bitwise.
  RunConfig cfg;
  cfg.eps0 = 2e-3;
  auto run_once = [&]() {
    VectorField u0 = make_initial_condition("random-band", cfg.eps0,
                                            rng::mix(cfg.seed, 0), grid);
    DecompositionResult d = decompose(u0, cfg.eps0, 2);
    CutoffParams params = make_cutoff_params(d, cfg.resolved_eps_bar());
    CascadeState state(d, params);
    NoiseBasis basis = make_noise_basis(4, 0.1);
    for (int step = 0; step < 5; ++step) {
      const auto inc = sample_increments(cfg.seed, 0, step, dt, 4);
      cascade_step(state, basis, inc.draws, dt);
    }
    return cascade_sum(state);
  };
  VectorField r1 = run_once();
  VectorField r2 = run_once();
  s.check("cascade.rerun_bitwise_identical", max_spec_diff(r1, r2), 0.0);

  // With phi forced to zero through a tiny eps_bar every level is pure heat.
  {
    VectorField u0 = make_initial_condition("random-band", 2e-3, 9, grid);
    DecompositionResult d = decompose(u0, 2e-3, 2);
    CutoffParams params;
    params.eps0 = 1e-12;
    params.eps_bar = 1e-10;
    params.level_caps = {10.0, 20.0, 40.0};
    CascadeState state(d, params);
    NoiseBasis basis = make_noise_basis(4, 0.1);
    std::vector<VectorField> direct;
    for (int k = 0; k <= 2; ++k) direct.push_back(state.level(k));
    for (int step = 0; step < 3; ++step) {
      const auto inc = sample_increments(1, 0, step, dt, 4);
      cascade_step(state, basis, inc.draws, dt);
      for (int k = 0; k <= 2; ++k) direct[k] = heat_step(direct[k], dt);
    }
    double diff = 0.0;
    for (int k = 0; k <= 2; ++k) {
      diff = std::max(diff, max_spec_diff(state.level(k), direct[k]));
    }
    s.check("cascade.zero_cutoff_is_pure_heat", diff, 0.0);
  }
}

void stopping_suite(Suite& s) {
  CutoffParams params;
  params.eps0 = 0.01;
  params.eps_bar = 0.08;
  params.level_caps = {1.0, 2.0};

  auto sample = [](double t, double n3, double n6) {
    LevelSample ls;
    ls.t = t;
    ls.norm3 = n3;
    ls.norm6 = n6;
    return ls;
  };
  std::vector<std::vector<LevelSample>> series(2);
  // Level 0 crosses eps_bar at t=0.2; level 1 crosses eps_bar/2 at t=0.3.
  series[0] = {sample(0.0, 0.01, 0.1), sample(0.1, 0.05, 0.1),
               sample(0.2, 0.09, 0.1), sample(0.3, 0.02, 0.1)};
  series[1] = {sample(0.0, 0.001, 0.1), sample(0.1, 0.01, 0.1),
               sample(0.2, 0.03, 0.1), sample(0.3, 0.05, 0.1)};
  StoppingRecord rec = detect_hits(series, params, 1.0);
  bool ok = rec.tau_k[0] == 0.2 && rec.tau_k[1] == 0.3 && rec.tau == 0.2 &&
            rec.sigma_k[0] == kNeverHit;
  // Appending beyond the horizon must not change anything.
  series[0].push_back(sample(1.5, 100.0, 100.0));
  StoppingRecord rec2 = detect_hits(series, params, 1.0);
  ok = ok && rec2.tau == rec.tau && rec2.tau_k[0] == rec.tau_k[0];
  s.check_true("stopping.first_crossing_and_append", ok,
               "tau=" + std::to_string(rec.tau));

  WilsonInterval w = wilson_interval(5, 10);
  // Reference: 95% Wilson interval for 5/10 is (0.2366, 0.7634).
  const double err = std::max(std::abs(w.lo - 0.2366), std::abs(w.hi - 0.7634));
  s.check("wilson.reference_5_of_10", err, 2e-4);
  WilsonInterval w0 = wilson_interval(0, 0);
  s.check_true("wilson.empty_is_vacuous", w0.lo == 0.0 && w0.hi == 1.0,
               "[0,1]");
}

void config_suite(Suite& s) {
  RunConfig base;
  RunConfig echo = parse_config(base.canonical_text());
  s.check_true("config.canonical_roundtrip",
               echo.canonical_text() == base.canonical_text(),
               "stable canonical form");
  s.check_true("config.default_steps", base.steps() == 1000,
               "steps=" + std::to_string(base.steps()));

  bool rejected = false;
  std::string msg;
  try {
    parse_config("data.eps0 = 0.01\ncutoff.eps_bar = 0.01\n");
  } catch (const ConfigError& e) {
    rejected = true;
    msg = e.what();
  }
  s.check_true("config.eps_bar_equal_eps0_rejected",
               rejected && msg.find("eps_bar must exceed 2*eps0") != std::string::npos,
               msg);

  rejected = false;
  try {
    parse_config("time.dt = 0\n");
  } catch (const ConfigError&) {
    rejected = true;
  }
  s.check_true("config.zero_dt_rejected", rejected, "time.dt = 0");

  rejected = false;
  try {
    parse_config("grid.m = 16\n");
  } catch (const ConfigError& e) {
    rejected = true;
    msg = e.what();
  }
  s.check_true("config.unknown_key_rejected",
               rejected && msg.find("unknown key") != std::string::npos, msg);
}

}  // namespace

int run_verify_suites(bool quiet) {
  Suite s;
  s.quiet = quiet;
  spectral_suite(s);
  initial_data_suite(s);
  noise_suite(s);
  cutoff_suite(s);
  integrator_suite(s);
  stopping_suite(s);
  config_suite(s);
  std::printf("%s: %d check(s) failed\n", s.failures == 0 ? "OK" : "FAILED",
              s.failures);
  return s.failures;
}
