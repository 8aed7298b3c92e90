#include "snse/cutoffs.hpp"

#include <cmath>
#include <stdexcept>

#include "snse/norms.hpp"

namespace snse {
namespace {

inline double h_fn(double r) { return std::exp(-1.0 / r); }

}  // namespace

double theta(double x) {
  if (x < 0.0) throw std::invalid_argument("theta: argument must be nonnegative");
  if (x <= 1.0) return 1.0;
  if (x >= 2.0) return 0.0;
  const double r = (2.0 - x) / (x - 1.0);
  const double a = h_fn(r);
  return a / (a + h_fn(1.0 / r));
}

bool CutoffParams::valid(std::string* why) const {
  auto fail = [&](const char* msg) {
    if (why) *why = msg;
    return false;
  };
  if (!(eps_bar > 2.0 * eps0)) return fail("eps_bar must exceed 2*eps0");
  if (!(eps_bar < 1.0)) return fail("eps_bar must be below 1");
  if (level_caps.empty()) return fail("level_caps must be nonempty");
  for (std::size_t k = 0; k < level_caps.size(); ++k) {
    if (!(level_caps[k] > 0.0)) return fail("level_caps must be positive");
    if (k > 0 && !(level_caps[k] > level_caps[k - 1])) {
      return fail("level_caps must be strictly increasing");
    }
  }
  return true;
}

CutoffParams make_cutoff_params(const DecompositionResult& d, double eps_bar,
                                double cap_base, double cap_growth) {
  CutoffParams p;
  p.eps0 = d.eps0;
  p.eps_bar = eps_bar;
  double running = 0.0;
  double growth = 1.0;
  for (const auto& level : d.levels) {
    const double norm6 = lp_norm(level, 6.0, NormMode::magnitude);
    running = std::max(running, norm6);
    p.level_caps.push_back(cap_base * std::max(running, 1.0) * growth);
    growth *= cap_growth;
  }
  std::string why;
  if (!p.valid(&why)) throw std::invalid_argument("cutoff params: " + why);
  // Caps must sit strictly above the initial level norms.
  for (std::size_t k = 0; k < d.levels.size(); ++k) {
    if (lp_norm(d.levels[k], 6.0, NormMode::magnitude) >= p.level_caps[k]) {
      throw std::invalid_argument("cutoff params: cap at or below ||v0||_6");
    }
  }
  return p;
}

double psi_from_norm(double norm6, double cap) { return theta(norm6 / cap); }

double psi(const VectorField& v_k, double cap) {
  return psi_from_norm(lp_norm(v_k, 6.0, NormMode::magnitude), cap);
}

double phi_from_norm(double norm3, int k, double eps_bar) {
  return theta(std::pow(2.0, k) * norm3 / eps_bar);
}

double phi(const VectorField& v_k, int k, double eps_bar) {
  return phi_from_norm(lp_norm(v_k, 3.0, NormMode::magnitude), k, eps_bar);
}

double zeta(const std::vector<double>& psis, int k) {
  double z = 1.0;
  for (int i = 0; i < k && i < static_cast<int>(psis.size()); ++i) z *= psis[i];
  return z;
}

}  // namespace snse
