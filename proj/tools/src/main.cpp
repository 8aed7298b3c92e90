#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "snse/csv.hpp"
#include "snse/cutoffs.hpp"
#include "snse/ensemble.hpp"
#include "snse/initial_data.hpp"
#include "snse/integrator.hpp"
#include "snse/manifest.hpp"
#include "snse/noise.hpp"
#include "snse/norms.hpp"
#include "snse/rng.hpp"
#include "snse/snapshot.hpp"
#include "snse/stopping.hpp"

#include "verify.hpp"

namespace {

using namespace snse;

void info(bool quiet, const std::string& msg) {
  if (!quiet) std::printf("%s\n", msg.c_str());
}

std::string snapshot_name(const char* stem, int step) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%08d.snse", stem, step);
  return buf;
}

void write_physical_snapshot(const std::string& path, VectorField u) {
  u.to_physical();
  write_snapshot(path, u);
}

int run_decompose(const RunConfig& cfg, bool quiet) {
  const std::string dir = cfg.output_dir;
  GridPtr grid = make_grid(cfg.grid_n);
  VectorField u0 = make_initial_condition(cfg.data_kind, cfg.eps0,
                                          rng::mix(cfg.seed, 0), grid);
  DecompositionResult d = decompose(u0, cfg.eps0, cfg.k_max);

  Manifest man(cfg, "decompose");
  {
    CsvWriter csv(dir + "/decompose.csv", {"k", "norm3", "norm6", "tail_error"});
    for (std::size_t k = 0; k < d.levels.size(); ++k) {
      csv.row({static_cast<double>(k),
               lp_norm(d.levels[k], 3.0, NormMode::magnitude),
               lp_norm(d.levels[k], 6.0, NormMode::magnitude),
               d.tail_errors[k]});
    }
  }
  man.add_output(dir, "decompose.csv");
  for (std::size_t k = 0; k < d.levels.size(); ++k) {
    const std::string name = "level_" + std::to_string(k) + ".snse";
    write_physical_snapshot(dir + "/" + name, d.levels[k]);
    man.add_output(dir, name);
  }
  if (d.truncated) man.add_note("truncated", "true");
  man.write(dir);
  info(quiet, "decompose: " + std::to_string(d.levels.size()) + " levels -> " + dir);
  return 0;
}

int run_simulate(const RunConfig& cfg, bool quiet) {
  const std::string dir = cfg.output_dir;
  GridPtr grid = make_grid(cfg.grid_n);
  VectorField u = make_initial_condition(cfg.data_kind, cfg.eps0,
                                         rng::mix(cfg.seed, 0), grid);
  u.to_spectral();
  NoiseBasis basis = make_noise_basis(cfg.mode_count, cfg.eps_sigma);
  Manifest man(cfg, "simulate");
  if (cfg.snapshot_every > 0) {
    std::filesystem::create_directories(dir + "/snapshots");
  }

  const int steps = cfg.steps();
  int done = 0;
  bool blew_up = false;
  {
    CsvWriter csv(dir + "/series.csv",
                  {"t", "level", "norm3", "norm6", "dissip3", "dissip6", "psi",
                   "phi", "zeta"});
    auto record = [&](double t) {
      VectorField up = u;
      up.to_physical();
      csv.row({t, -1.0, lp_norm(up, 3.0, NormMode::magnitude),
               lp_norm(up, 6.0, NormMode::magnitude), dissipation_sum(up, 3),
               dissipation_sum(up, 6), 1.0, 1.0, 1.0});
    };
    for (int s = 0; s < steps; ++s) {
      record(cfg.dt * s);
      if (cfg.snapshot_every > 0 && s % cfg.snapshot_every == 0) {
        const std::string name = "snapshots/" + snapshot_name("u", s);
        write_physical_snapshot(dir + "/" + name, u);
        man.add_output(dir, name);
      }
      const auto inc = sample_increments(cfg.seed, 0, s, cfg.dt, cfg.mode_count);
      try {
        u = snse_step(u, basis, inc.draws, cfg.dt);
      } catch (const BlowUpError&) {
        blew_up = true;
        man.add_note("blow_up_step", std::to_string(s));
        break;
      }
      done = s + 1;
    }
    if (!blew_up) record(cfg.dt * steps);
  }
  man.add_output(dir, "series.csv");
  if (!blew_up && cfg.snapshot_every > 0 && steps % cfg.snapshot_every == 0) {
    const std::string name = "snapshots/" + snapshot_name("u", steps);
    write_physical_snapshot(dir + "/" + name, u);
    man.add_output(dir, name);
  }
  man.write(dir);
  info(quiet, "simulate: " + std::to_string(done) + " steps -> " + dir);
  return blew_up ? 1 : 0;
}

int run_cascade(const RunConfig& cfg, bool quiet) {
  const std::string dir = cfg.output_dir;
  GridPtr grid = make_grid(cfg.grid_n);
  VectorField u0 = make_initial_condition(cfg.data_kind, cfg.eps0,
                                          rng::mix(cfg.seed, 0), grid);
  DecompositionResult d = decompose(u0, cfg.eps0, cfg.k_max);
  const double eb = cfg.resolved_eps_bar();
  CutoffParams params = make_cutoff_params(d, eb, cfg.cap_base, cfg.cap_growth);
  CascadeState state(d, params);
  NoiseBasis basis = make_noise_basis(cfg.mode_count, cfg.eps_sigma);

  Manifest man(cfg, "cascade");
  if (cfg.snapshot_every > 0) {
    std::filesystem::create_directories(dir + "/snapshots");
  }

  const int steps = cfg.steps();
  bool blew_up = false;
  {
    CsvWriter series(dir + "/series.csv",
                     {"t", "level", "norm3", "norm6", "dissip3", "dissip6",
                      "psi", "phi", "zeta"});
    CsvWriter cuts(dir + "/cutoffs.csv", {"t", "k", "psi", "phi", "zeta"});
    auto emit = [&](const std::vector<LevelSample>& rows) {
      for (std::size_t k = 0; k < rows.size(); ++k) {
        const LevelSample& p = rows[k];
        series.row({p.t, static_cast<double>(k), p.norm3, p.norm6, p.dissip3,
                    p.dissip6, p.psi, p.phi, p.zeta});
        cuts.row({p.t, static_cast<double>(k), p.psi, p.phi, p.zeta});
      }
    };
    for (int s = 0; s < steps; ++s) {
      if (cfg.snapshot_every > 0 && s % cfg.snapshot_every == 0) {
        const std::string name = "snapshots/" + snapshot_name("u", s);
        write_physical_snapshot(dir + "/" + name, cascade_sum(state));
        man.add_output(dir, name);
      }
      const auto inc = sample_increments(cfg.seed, 0, s, cfg.dt, cfg.mode_count);
      try {
        StepReport rep = cascade_step(state, basis, inc.draws, cfg.dt);
        emit(rep.pre);
      } catch (const BlowUpError&) {
        blew_up = true;
        man.add_note("blow_up_step", std::to_string(s));
        break;
      }
    }
    if (!blew_up) {
      append_terminal_samples(state);
      std::vector<LevelSample> fin;
      for (int k = 0; k <= state.k_max(); ++k) {
        fin.push_back(state.series()[k].back());
      }
      emit(fin);
      if (cfg.snapshot_every > 0 && steps % cfg.snapshot_every == 0) {
        const std::string name = "snapshots/" + snapshot_name("u", steps);
        write_physical_snapshot(dir + "/" + name, cascade_sum(state));
        man.add_output(dir, name);
      }
    }
  }
  man.add_output(dir, "series.csv");
  man.add_output(dir, "cutoffs.csv");

  if (!blew_up) {
    StoppingRecord rec = detect_hits(state.series(), params, cfg.horizon);
    CsvWriter stop(dir + "/stopping.csv", {"k", "tau_k", "sigma_k", "tau_up_to_k"});
    for (int k = 0; k <= state.k_max(); ++k) {
      stop.row({static_cast<double>(k), rec.tau_k[k], rec.sigma_k[k],
                rec.tau_up_to_k[k]});
    }
    man.add_note("tau", CsvWriter::format(rec.tau));
    man.add_note("hit", rec.hit() ? "true" : "false");
  }
  if (!blew_up) man.add_output(dir, "stopping.csv");
  man.write(dir);
  info(quiet, "cascade: " + std::to_string(steps) + " steps, k_max=" +
                  std::to_string(cfg.k_max) + " -> " + dir);
  return blew_up ? 1 : 0;
}

int run_picard(const RunConfig& cfg, double t_star, int iters, bool quiet) {
  const std::string dir = cfg.output_dir;
  GridPtr grid = make_grid(cfg.grid_n);
  VectorField u0 = make_initial_condition(cfg.data_kind, cfg.eps0,
                                          rng::mix(cfg.seed, 0), grid);
  DecompositionResult d = decompose(u0, cfg.eps0, 0);
  const double eb = cfg.resolved_eps_bar();
  CutoffParams params = make_cutoff_params(d, eb, cfg.cap_base, cfg.cap_growth);
  NoiseBasis basis = make_noise_basis(cfg.mode_count, cfg.eps_sigma);

  PicardContext ctx;
  ctx.k = 0;
  ctx.eps_bar = eb;
  ctx.cap = params.level_caps[0];
  PicardResult pr = picard_solve(d.levels[0], ctx, basis, cfg.dt, t_star, iters,
                                 cfg.seed, 0);

  Manifest man(cfg, "picard");
  {
    CsvWriter csv(dir + "/picard.csv", {"j", "diff6", "ratio"});
    for (std::size_t j = 0; j < pr.diffs.size(); ++j) {
      const double ratio = j == 0 ? 0.0 : pr.diffs[j] / pr.diffs[j - 1];
      csv.row({static_cast<double>(j), pr.diffs[j], ratio});
    }
  }
  man.add_output(dir, "picard.csv");
  man.add_note("t_star", CsvWriter::format(t_star));
  man.add_note("iterations", std::to_string(iters));
  man.add_note("nonmonotone", pr.nonmonotone ? "true" : "false");
  man.write(dir);
  info(quiet, "picard: " + std::to_string(pr.diffs.size()) + " differences -> " + dir);
  return 0;
}

void write_partial_csv(const std::string& path, const EnsembleStats& st) {
  CsvWriter csv(path, {"field", "k", "value"});
  auto put = [&](const char* field, int k, const std::string& value) {
    csv.raw_row({field, std::to_string(k), value});
  };
  put("eps0", -1, CsvWriter::format(st.eps0));
  put("horizon", -1, CsvWriter::format(st.horizon));
  put("n", -1, std::to_string(st.n));
  put("n_invalid", -1, std::to_string(st.n_invalid));
  put("hits", -1, std::to_string(st.hits));
  put("energy_sum", -1, CsvWriter::format(st.energy_sum));
  put("energy_sq_sum", -1, CsvWriter::format(st.energy_sq_sum));
  for (std::size_t k = 0; k < st.level_hits.size(); ++k) {
    put("level_hits", static_cast<int>(k), std::to_string(st.level_hits[k]));
  }
  for (std::size_t k = 0; k < st.ceiling_violations.size(); ++k) {
    put("ceiling_violations", static_cast<int>(k),
        std::to_string(st.ceiling_violations[k]));
  }
}

EnsembleStats read_partial_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open partial file: " + path);
  EnsembleStats st;
  std::string line;
  if (!std::getline(in, line) || line != "field,k,value") {
    throw std::runtime_error("bad partial file header: " + path);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field, kstr, value;
    if (!std::getline(row, field, ',') || !std::getline(row, kstr, ',') ||
        !std::getline(row, value)) {
      throw std::runtime_error("bad partial row: " + line);
    }
    const int k = std::stoi(kstr);
    auto level_slot = [&](std::vector<std::uint64_t>& v) -> std::uint64_t& {
      if (static_cast<int>(v.size()) <= k) v.resize(k + 1, 0);
      return v[k];
    };
    if (field == "eps0") st.eps0 = std::stod(value);
    else if (field == "horizon") st.horizon = std::stod(value);
    else if (field == "n") st.n = std::stoull(value);
    else if (field == "n_invalid") st.n_invalid = std::stoull(value);
    else if (field == "hits") st.hits = std::stoull(value);
    else if (field == "energy_sum") st.energy_sum = std::stod(value);
    else if (field == "energy_sq_sum") st.energy_sq_sum = std::stod(value);
    else if (field == "level_hits") level_slot(st.level_hits) = std::stoull(value);
    else if (field == "ceiling_violations") level_slot(st.ceiling_violations) = std::stoull(value);
    else throw std::runtime_error("unknown partial field: " + field);
  }
  return st;
}

void write_ensemble_outputs(const std::string& dir, const EnsembleStats& st,
                            Manifest& man) {
  {
    CsvWriter csv(dir + "/summary.csv",
                  {"eps0", "n", "n_invalid", "p_hat", "ci_lo", "ci_hi",
                   "energy_lhs_mean", "energy_ratio"});
    const WilsonInterval ci = st.p_tau();
    csv.raw_row({CsvWriter::format(st.eps0), std::to_string(st.n),
                 std::to_string(st.n_invalid), CsvWriter::format(ci.p_hat),
                 CsvWriter::format(ci.lo), CsvWriter::format(ci.hi),
                 CsvWriter::format(st.energy_mean()),
                 CsvWriter::format(st.energy_ratio())});
  }
  {
    CsvWriter csv(dir + "/levels.csv", {"k", "p_hat_level", "ceiling_violations"});
    for (std::size_t k = 0; k < st.level_hits.size(); ++k) {
      const double p = st.n ? static_cast<double>(st.level_hits[k]) /
                                  static_cast<double>(st.n)
                            : 0.0;
      csv.raw_row({std::to_string(k), CsvWriter::format(p),
                   std::to_string(st.ceiling_violations[k])});
    }
  }
  write_partial_csv(dir + "/partial.csv", st);
  man.add_output(dir, "summary.csv");
  man.add_output(dir, "levels.csv");
  man.add_output(dir, "partial.csv");
}

int run_ensemble_cmd(const RunConfig& cfg, std::uint64_t count,
                     std::uint64_t first, const std::vector<std::string>& merge,
                     bool quiet) {
  const std::string dir = cfg.output_dir;
  Manifest man(cfg, "ensemble");
  EnsembleStats st;
  if (!merge.empty()) {
    for (const std::string& src : merge) {
      st.merge(read_partial_csv(src + "/partial.csv"));
    }
    man.add_note("merged_from", std::to_string(merge.size()) + " partials");
  } else {
    const std::uint64_t n = count > 0 ? count : static_cast<std::uint64_t>(cfg.ensemble_n);
    st = run_ensemble(cfg, n, first);
    man.add_note("first_realization", std::to_string(first));
  }
  write_ensemble_outputs(dir, st, man);
  man.write(dir);
  const WilsonInterval ci = st.p_tau();
  info(quiet, "ensemble: n=" + std::to_string(st.n) + " p_hat=" +
                  CsvWriter::format(ci.p_hat) + " -> " + dir);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral cascade solver for the stochastic "
               "incompressible Navier-Stokes system on the 3-torus"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool quiet = false;
  auto* config_opt = app.add_option("--config", config_path, "configuration file path");
  auto* seed_opt = app.add_option("--seed", seed, "override the config seed");
  auto* out_opt = app.add_option("--out", out_dir, "override the output directory");
  app.add_flag("--quiet", quiet, "suppress progress output");

  CLI::App* c_decompose =
      app.add_subcommand("decompose", "split the initial field into cascade levels");
  CLI::App* c_simulate =
      app.add_subcommand("simulate", "direct stochastic Navier-Stokes run");
  CLI::App* c_cascade =
      app.add_subcommand("cascade", "truncated cascade run with stopping detection");
  CLI::App* c_picard =
      app.add_subcommand("picard", "fixed-point iteration convergence table");
  CLI::App* c_ensemble =
      app.add_subcommand("ensemble", "Monte Carlo hitting statistics");
  CLI::App* c_verify =
      app.add_subcommand("verify", "run module invariant suites");
  for (CLI::App* c : {c_decompose, c_simulate, c_cascade, c_picard, c_ensemble, c_verify}) {
    c->fallthrough();
  }

  double t_star = 0.05;
  int iters = 7;
  c_picard->add_option("--t-star", t_star, "fixed-point horizon")->check(CLI::PositiveNumber);
  c_picard->add_option("--iters", iters, "iterate count")->check(CLI::PositiveNumber);

  std::uint64_t ens_count = 0;
  std::uint64_t ens_first = 0;
  std::vector<std::string> merge_dirs;
  c_ensemble->add_option("--count", ens_count, "realizations (default ensemble.n)");
  c_ensemble->add_option("--first", ens_first, "first realization index");
  c_ensemble->add_option("--merge", merge_dirs,
                         "merge partial.csv files from these run directories");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg;
    if (config_opt->count() > 0) cfg = load_config_file(config_path);
    if (seed_opt->count() > 0) cfg.seed = seed;
    if (out_opt->count() > 0) cfg.output_dir = out_dir;

    if (c_verify->parsed()) {
      return run_verify_suites(quiet) == 0 ? 0 : 1;
    }
    std::filesystem::create_directories(cfg.output_dir);
    if (c_decompose->parsed()) return run_decompose(cfg, quiet);
    if (c_simulate->parsed()) return run_simulate(cfg, quiet);
    if (c_cascade->parsed()) return run_cascade(cfg, quiet);
    if (c_picard->parsed()) return run_picard(cfg, t_star, iters, quiet);
    if (c_ensemble->parsed()) {
      return run_ensemble_cmd(cfg, ens_count, ens_first, merge_dirs, quiet);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
