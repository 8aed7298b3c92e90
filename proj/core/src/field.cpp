#include "snse/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "snse/fft.hpp"

namespace snse {

Grid::Grid(GridSpec spec) : spec_(spec) {
  if (!spec_.valid()) throw std::invalid_argument("grid.n must be even and >= 8");
  const int n = spec_.n;
  const int nc = spec_.nc();
  // |k| < n/3 passes; compared as 3|k| < n so the boundary mode survives
  // when n is not a multiple of three.
  mask_.assign(spec_.spec_size(), 0);
  for (int iz = 0; iz < n; ++iz) {
    const int kz = spec_.wavenumber(iz);
    for (int iy = 0; iy < n; ++iy) {
      const int ky = spec_.wavenumber(iy);
      for (int ikx = 0; ikx < nc; ++ikx) {
        const bool keep = 3 * ikx < n && 3 * std::abs(ky) < n &&
                          3 * std::abs(kz) < n;
        mask_[spec_.spec_index(ikx, iy, iz)] = keep ? 1 : 0;
      }
    }
  }
}

GridPtr make_grid(int n) { return std::make_shared<Grid>(GridSpec{n}); }

ScalarField::ScalarField(GridPtr grid, Rep rep) : grid_(std::move(grid)), rep_(rep) {
  if (rep_ == Rep::physical) {
    phys_.assign(spec().phys_size(), 0.0);
  } else {
    spec_.assign(spec().spec_size(), {0.0, 0.0});
  }
}

std::vector<double>& ScalarField::phys() {
  if (rep_ != Rep::physical) throw std::logic_error("field is spectral");
  return phys_;
}
const std::vector<double>& ScalarField::phys() const {
  if (rep_ != Rep::physical) throw std::logic_error("field is spectral");
  return phys_;
}
std::vector<std::complex<double>>& ScalarField::spectral() {
  if (rep_ != Rep::spectral) throw std::logic_error("field is physical");
  return spec_;
}
const std::vector<std::complex<double>>& ScalarField::spectral() const {
  if (rep_ != Rep::spectral) throw std::logic_error("field is physical");
  return spec_;
}

void ScalarField::to_spectral() {
  if (rep_ == Rep::spectral) return;
  spec_.resize(spec().spec_size());
  fft::forward(spec(), phys_.data(), spec_.data());
  phys_.clear();
  phys_.shrink_to_fit();
  rep_ = Rep::spectral;
}

void ScalarField::to_physical() {
  if (rep_ == Rep::physical) return;
  phys_.resize(spec().phys_size());
  fft::inverse(spec(), spec_.data(), phys_.data());
  spec_.clear();
  spec_.shrink_to_fit();
  rep_ = Rep::physical;
}

void ScalarField::set_zero() {
  if (rep_ == Rep::physical) {
    std::fill(phys_.begin(), phys_.end(), 0.0);
  } else {
    std::fill(spec_.begin(), spec_.end(), std::complex<double>{0.0, 0.0});
  }
}

bool ScalarField::finite() const {
  if (rep_ == Rep::physical) {
    return std::all_of(phys_.begin(), phys_.end(),
                       [](double v) { return std::isfinite(v); });
  }
  return std::all_of(spec_.begin(), spec_.end(), [](const std::complex<double>& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  });
}

ScalarField transform(const ScalarField& f, Rep direction) {
  if (!f.finite()) throw std::invalid_argument("transform: non-finite input");
  ScalarField out = f;
  if (direction == Rep::spectral) {
    out.to_spectral();
  } else {
    out.to_physical();
  }
  return out;
}

VectorField::VectorField(GridPtr grid, Rep rep)
    : comps_{ScalarField(grid, rep), ScalarField(grid, rep), ScalarField(grid, rep)} {}

void VectorField::to_physical() {
  for (auto& c : comps_) c.to_physical();
}
void VectorField::to_spectral() {
  for (auto& c : comps_) c.to_spectral();
}
void VectorField::set_zero() {
  for (auto& c : comps_) c.set_zero();
}
bool VectorField::finite() const {
  return comps_[0].finite() && comps_[1].finite() && comps_[2].finite();
}

void VectorField::axpy(double a, const VectorField& other) {
  for (int j = 0; j < 3; ++j) {
    auto& dst = comps_[j].spectral();
    const auto& src = other[j].spectral();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += a * src[i];
  }
}

}  // namespace snse
