#pragma once

#include <vector>

#include "snse/field.hpp"
#include "snse/initial_data.hpp"

namespace snse {

// Smooth transition: 1 on [0,1], 0 on [2,inf), S((2-x)/(x-1)) in between
// with S(r) = h(r)/(h(r) + h(1/r)), h(r) = exp(-1/r). C-infinity and
// nonincreasing.
double theta(double x);

struct CutoffParams {
  double eps0 = 0.0;
  double eps_bar = 0.0;             // must lie in (2*eps0, 1)
  std::vector<double> level_caps;   // M_k, strictly increasing, M_k > ||v0^(k)||_6

  bool valid(std::string* why = nullptr) const;
};

// Default caps M_k = base * max(1, running max of ||v0^(j)||_6 for j <= k)
// * growth^k. The running max keeps the sequence strictly increasing even
// though the per-level norms decay.
CutoffParams make_cutoff_params(const DecompositionResult& d, double eps_bar,
                                double cap_base = 10.0, double cap_growth = 2.0);

// psi_k = theta(||v^(k)||_6 / M_k), phi_k = theta(2^k ||v^(k)||_3 / eps_bar),
// zeta_{k-1} = 1 for k = 0, else prod_{i<k} psi_i. Norms in magnitude mode.
double psi(const VectorField& v_k, double cap);
double psi_from_norm(double norm6, double cap);
double phi(const VectorField& v_k, int k, double eps_bar);
double phi_from_norm(double norm3, int k, double eps_bar);
double zeta(const std::vector<double>& psis, int k);

}  // namespace snse
