#include "snse/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace snse {
namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got \"" + v + "\"");
  }
  if (pos != v.size()) {
    throw ConfigError(key + ": expected a number, got \"" + v + "\"");
  }
  return out;
}

long long parse_int(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  long long out = 0;
  try {
    out = std::stoll(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got \"" + v + "\"");
  }
  if (pos != v.size()) {
    throw ConfigError(key + ": expected an integer, got \"" + v + "\"");
  }
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  unsigned long long out = 0;
  try {
    out = std::stoull(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an unsigned integer, got \"" + v + "\"");
  }
  if (pos != v.size() || (!v.empty() && v[0] == '-')) {
    throw ConfigError(key + ": expected an unsigned integer, got \"" + v + "\"");
  }
  return out;
}

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void validate(const RunConfig& c) {
  std::vector<std::string> bad;
  if (c.grid_n < 8 || c.grid_n % 2 != 0) {
    bad.push_back("grid.n must be even and at least 8");
  }
  if (!(c.dt > 0.0)) bad.push_back("time.dt must be positive");
  if (!(c.horizon > 0.0)) bad.push_back("time.horizon must be positive");
  if (c.dt > 0.0 && c.horizon > 0.0) {
    const double steps = c.horizon / c.dt;
    if (steps > 1e7) bad.push_back("time.horizon / time.dt must not exceed 1e7 steps");
    if (std::llround(steps) < 1) bad.push_back("time.horizon must cover at least one step");
  }
  if (c.k_max < 0) bad.push_back("cascade.k_max must be nonnegative");
  if (c.data_kind != "taylor-green" && c.data_kind != "single-mode" &&
      c.data_kind != "random-band") {
    bad.push_back("data.kind must be one of taylor-green, single-mode, random-band");
  }
  if (!(c.eps0 > 0.0)) bad.push_back("data.eps0 must be positive");
  if (c.eps_bar < 0.0) {
    bad.push_back("cutoff.eps_bar must be positive (or 0 to derive the default)");
  } else {
    const double eb = c.resolved_eps_bar();
    if (!(eb > 2.0 * c.eps0)) bad.push_back("eps_bar must exceed 2*eps0");
    if (!(eb < 1.0)) bad.push_back("eps_bar must be below 1");
  }
  if (!(c.cap_base > 0.0)) bad.push_back("cutoff.cap_rule.base must be positive");
  if (!(c.cap_growth > 1.0)) bad.push_back("cutoff.cap_rule.growth must exceed 1");
  if (c.mode_count < 1) bad.push_back("noise.mode_count must be at least 1");
  if (!(c.eps_sigma > 0.0) || c.eps_sigma > 1.0) {
    bad.push_back("noise.eps_sigma must lie in (0, 1]");
  }
  if (c.ensemble_n < 1) bad.push_back("ensemble.n must be at least 1");
  if (c.output_dir.empty()) bad.push_back("output.dir must be nonempty");
  if (c.snapshot_every < 0) bad.push_back("snapshot.every must be nonnegative");
  if (!bad.empty()) {
    std::string msg = bad[0];
    for (std::size_t i = 1; i < bad.size(); ++i) msg += "; " + bad[i];
    throw ConfigError(msg);
  }
}

}  // namespace

int RunConfig::steps() const {
  return static_cast<int>(std::llround(horizon / dt));
}

double RunConfig::resolved_eps_bar() const {
  if (eps_bar > 0.0) return eps_bar;
  return std::min(0.5, 8.0 * eps0);
}

std::string RunConfig::canonical_text() const {
  std::ostringstream os;
  os << "cascade.k_max = " << k_max << "\n";
  os << "cutoff.cap_rule.base = " << fmt_double(cap_base) << "\n";
  os << "cutoff.cap_rule.growth = " << fmt_double(cap_growth) << "\n";
  os << "cutoff.eps_bar = " << fmt_double(resolved_eps_bar()) << "\n";
  os << "data.eps0 = " << fmt_double(eps0) << "\n";
  os << "data.kind = " << data_kind << "\n";
  os << "ensemble.n = " << ensemble_n << "\n";
  os << "grid.n = " << grid_n << "\n";
  os << "noise.eps_sigma = " << fmt_double(eps_sigma) << "\n";
  os << "noise.mode_count = " << mode_count << "\n";
  os << "output.dir = " << output_dir << "\n";
  os << "seed = " << seed << "\n";
  os << "snapshot.every = " << snapshot_every << "\n";
  os << "time.dt = " << fmt_double(dt) << "\n";
  os << "time.horizon = " << fmt_double(horizon) << "\n";
  return os.str();
}

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::set<std::string> seen;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected \"key = value\"");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty()) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected \"key = value\"");
    }
    if (!seen.insert(key).second) {
      throw ConfigError("duplicate key: " + key);
    }
    if (key == "grid.n") {
      c.grid_n = static_cast<int>(parse_int(key, val));
    } else if (key == "time.dt") {
      c.dt = parse_double(key, val);
    } else if (key == "time.horizon") {
      c.horizon = parse_double(key, val);
    } else if (key == "cascade.k_max") {
      c.k_max = static_cast<int>(parse_int(key, val));
    } else if (key == "data.kind") {
      c.data_kind = val;
    } else if (key == "data.eps0") {
      c.eps0 = parse_double(key, val);
    } else if (key == "cutoff.eps_bar") {
      c.eps_bar = parse_double(key, val);
    } else if (key == "cutoff.cap_rule.base") {
      c.cap_base = parse_double(key, val);
    } else if (key == "cutoff.cap_rule.growth") {
      c.cap_growth = parse_double(key, val);
    } else if (key == "noise.mode_count") {
      c.mode_count = static_cast<int>(parse_int(key, val));
    } else if (key == "noise.eps_sigma") {
      c.eps_sigma = parse_double(key, val);
    } else if (key == "ensemble.n") {
      c.ensemble_n = static_cast<int>(parse_int(key, val));
    } else if (key == "seed") {
      c.seed = parse_u64(key, val);
    } else if (key == "output.dir") {
      c.output_dir = val;
    } else if (key == "snapshot.every") {
      c.snapshot_every = static_cast<int>(parse_int(key, val));
    } else {
      throw ConfigError("unknown key: " + key);
    }
  }
  validate(c);
  return c;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace snse
