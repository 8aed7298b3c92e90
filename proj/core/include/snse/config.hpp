#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace snse {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat dotted-key run configuration. Every field has a default; eps_bar
// defaults to min(0.5, 8*eps0) when absent.
struct RunConfig {
  int grid_n = 16;                     // grid.n
  double dt = 1e-3;                    // time.dt
  double horizon = 1.0;                // time.horizon
  int k_max = 3;                       // cascade.k_max
  std::string data_kind = "random-band";  // data.kind
  double eps0 = 2e-3;                  // data.eps0
  double eps_bar = 0.0;                // cutoff.eps_bar (0 = derive default)
  double cap_base = 10.0;              // cutoff.cap_rule.base
  double cap_growth = 2.0;             // cutoff.cap_rule.growth
  int mode_count = 8;                  // noise.mode_count
  double eps_sigma = 0.1;              // noise.eps_sigma
  int ensemble_n = 8;                  // ensemble.n
  std::uint64_t seed = 1;              // seed
  std::string output_dir = "snse-out"; // output.dir
  int snapshot_every = 0;              // snapshot.every (0 = no snapshots)

  int steps() const;
  double resolved_eps_bar() const;

  // Canonical key=value serialization (sorted keys, %.17g floats); the
  // manifest hash is computed over this text.
  std::string canonical_text() const;
};

// Strict parser: "key = value" lines, '#' comments, unknown keys fatal.
// Violations name the constraint that failed.
RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::string& path);

}  // namespace snse
