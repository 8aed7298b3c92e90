#include "snse/norms.hpp"

#include <cmath>
#include <stdexcept>

namespace snse {
namespace {

bool supported_p(double p) {
  return p == 2.0 || p == 3.0 || p == 6.0 || p == 9.0 ||
         p == std::numeric_limits<double>::infinity();
}

double accumulate_pow(const std::vector<double>& v, double p) {
  double s = 0.0;
  if (p == 2.0) {
    for (double x : v) s += x * x;
  } else if (p == 3.0) {
    for (double x : v) {
      const double a = std::fabs(x);
      s += a * a * a;
    }
  } else if (p == 6.0) {
    for (double x : v) {
      const double a = x * x;
      s += a * a * a;
    }
  } else {
    for (double x : v) s += std::pow(std::fabs(x), p);
  }
  return s;
}

}  // namespace

namespace detail {

double lp_norm_any(const ScalarField& f, double p) {
  ScalarField g = f;
  g.to_physical();
  const auto& v = g.phys();
  if (p == std::numeric_limits<double>::infinity()) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
  }
  const double s = accumulate_pow(v, p);
  return std::pow(g.spec().cell_volume() * s, 1.0 / p);
}

}  // namespace detail

double lp_norm(const ScalarField& f, double p) {
  if (!supported_p(p)) throw std::invalid_argument("lp_norm: unsupported exponent");
  return detail::lp_norm_any(f, p);
}

double lp_norm(const VectorField& u, double p, NormMode mode) {
  if (!supported_p(p)) throw std::invalid_argument("lp_norm: unsupported exponent");
  VectorField v = u;
  v.to_physical();
  const auto& x = v[0].phys();
  const auto& y = v[1].phys();
  const auto& z = v[2].phys();
  const std::size_t m = x.size();
  if (p == std::numeric_limits<double>::infinity()) {
    double mx = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (mode == NormMode::magnitude) {
        mx = std::max(mx, std::sqrt(x[i] * x[i] + y[i] * y[i] + z[i] * z[i]));
      } else {
        mx = std::max({mx, std::fabs(x[i]), std::fabs(y[i]), std::fabs(z[i])});
      }
    }
    return mx;
  }
  double s = 0.0;
  if (mode == NormMode::magnitude) {
    for (std::size_t i = 0; i < m; ++i) {
      const double q = x[i] * x[i] + y[i] * y[i] + z[i] * z[i];
      if (p == 2.0) {
        s += q;
      } else if (p == 3.0) {
        s += q * std::sqrt(q);
      } else if (p == 6.0) {
        s += q * q * q;
      } else {
        s += std::pow(q, p / 2.0);
      }
    }
  } else {
    s = accumulate_pow(x, p) + accumulate_pow(y, p) + accumulate_pow(z, p);
  }
  return std::pow(v.spec().cell_volume() * s, 1.0 / p);
}

double dissipation(const ScalarField& f, int p) {
  if (p != 2 && p != 3 && p != 6) {
    throw std::invalid_argument("dissipation: p must be 2, 3 or 6");
  }
  ScalarField g = f;
  g.to_physical();
  const auto& v = g.phys();
  const GridSpec& spec = g.spec();
  const int n = spec.n;

  std::vector<double> w(v.size());
  if (p == 2) {
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = std::fabs(v[i]);
  } else if (p == 3) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double a = std::fabs(v[i]);
      w[i] = a * std::sqrt(a);
    }
  } else {
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double a = std::fabs(v[i]);
      w[i] = a * a * a;
    }
  }

  const double inv2h = 1.0 / (2.0 * spec.spacing());
  double s = 0.0;
  for (int iz = 0; iz < n; ++iz) {
    const int izp = iz + 1 == n ? 0 : iz + 1;
    const int izm = iz == 0 ? n - 1 : iz - 1;
    for (int iy = 0; iy < n; ++iy) {
      const int iyp = iy + 1 == n ? 0 : iy + 1;
      const int iym = iy == 0 ? n - 1 : iy - 1;
      for (int ix = 0; ix < n; ++ix) {
        const int ixp = ix + 1 == n ? 0 : ix + 1;
        const int ixm = ix == 0 ? n - 1 : ix - 1;
        const double gx = (w[spec.phys_index(ixp, iy, iz)] -
                           w[spec.phys_index(ixm, iy, iz)]) * inv2h;
        const double gy = (w[spec.phys_index(ix, iyp, iz)] -
                           w[spec.phys_index(ix, iym, iz)]) * inv2h;
        const double gz = (w[spec.phys_index(ix, iy, izp)] -
                           w[spec.phys_index(ix, iy, izm)]) * inv2h;
        s += gx * gx + gy * gy + gz * gz;
      }
    }
  }
  return spec.cell_volume() * s;
}

double dissipation_sum(const VectorField& u, int p) {
  return dissipation(u[0], p) + dissipation(u[1], p) + dissipation(u[2], p);
}

double interp_ratio(const ScalarField& f, int p) {
  if (p != 2 && p != 3 && p != 6) {
    throw std::invalid_argument("interp_ratio: p must be 2, 3 or 6");
  }
  ScalarField g = f;
  g.to_physical();
  const auto& v = g.phys();
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  const double n2 = detail::lp_norm_any(g, 2.0);
  if (n2 == 0.0 || std::fabs(mean) > 1e-10 * n2) {
    throw std::invalid_argument("interp_ratio: field mean is not ~0");
  }
  const double num = std::pow(detail::lp_norm_any(g, 3.0 * p), static_cast<double>(p));
  const double den = dissipation(g, p);
  if (den == 0.0) throw std::invalid_argument("interp_ratio: zero dissipation");
  return num / den;
}

}  // namespace snse
