#include "snse/spectral.hpp"

namespace snse {

VectorField leray_project(const VectorField& u) {
  VectorField out = u;
  out.to_spectral();
  const GridSpec& g = out.spec();
  const int n = g.n;
  const int nc = g.nc();
  auto& ux = out[0].spectral();
  auto& uy = out[1].spectral();
  auto& uz = out[2].spectral();
  for (int iz = 0; iz < n; ++iz) {
    const double kz = g.wavenumber(iz);
    for (int iy = 0; iy < n; ++iy) {
      const double ky = g.wavenumber(iy);
      for (int ikx = 0; ikx < nc; ++ikx) {
        const double kx = ikx;
        const std::size_t i = g.spec_index(ikx, iy, iz);
        const double k2 = kx * kx + ky * ky + kz * kz;
        if (k2 == 0.0) {
          // Mean-zero projection: the constant mode is removed.
          ux[i] = uy[i] = uz[i] = 0.0;
          continue;
        }
        const std::complex<double> d = (kx * ux[i] + ky * uy[i] + kz * uz[i]) / k2;
        ux[i] -= kx * d;
        uy[i] -= ky * d;
        uz[i] -= kz * d;
      }
    }
  }
  return out;
}

ScalarField divergence(const VectorField& u) {
  VectorField v = u;
  v.to_spectral();
  const GridSpec& g = v.spec();
  ScalarField out(v.grid_ptr(), Rep::spectral);
  auto& d = out.spectral();
  const auto& ux = v[0].spectral();
  const auto& uy = v[1].spectral();
  const auto& uz = v[2].spectral();
  const int n = g.n;
  const int nc = g.nc();
  const std::complex<double> I{0.0, 1.0};
  for (int iz = 0; iz < n; ++iz) {
    const double kz = g.wavenumber(iz);
    for (int iy = 0; iy < n; ++iy) {
      const double ky = g.wavenumber(iy);
      for (int ikx = 0; ikx < nc; ++ikx) {
        const std::size_t i = g.spec_index(ikx, iy, iz);
        d[i] = I * (static_cast<double>(ikx) * ux[i] + ky * uy[i] + kz * uz[i]);
      }
    }
  }
  return out;
}

VectorField gradient(const ScalarField& f) {
  ScalarField s = f;
  s.to_spectral();
  const GridSpec& g = s.spec();
  VectorField out(s.grid_ptr(), Rep::spectral);
  const auto& fs = s.spectral();
  const int n = g.n;
  const int nc = g.nc();
  const std::complex<double> I{0.0, 1.0};
  for (int iz = 0; iz < n; ++iz) {
    const double kz = g.wavenumber(iz);
    for (int iy = 0; iy < n; ++iy) {
      const double ky = g.wavenumber(iy);
      for (int ikx = 0; ikx < nc; ++ikx) {
        const std::size_t i = g.spec_index(ikx, iy, iz);
        out[0].spectral()[i] = I * static_cast<double>(ikx) * fs[i];
        out[1].spectral()[i] = I * ky * fs[i];
        out[2].spectral()[i] = I * kz * fs[i];
      }
    }
  }
  return out;
}

ScalarField dealias(const ScalarField& f) {
  ScalarField out = f;
  out.to_spectral();
  const auto& mask = out.grid().dealias_mask();
  auto& s = out.spectral();
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!mask[i]) s[i] = 0.0;
  }
  return out;
}

VectorField dealias(const VectorField& u) {
  VectorField out = u;
  out.to_spectral();
  const auto& mask = out.grid().dealias_mask();
  for (int j = 0; j < 3; ++j) {
    auto& s = out[j].spectral();
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!mask[i]) s[i] = 0.0;
    }
  }
  return out;
}

}  // namespace snse
