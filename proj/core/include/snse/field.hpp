#pragma once

#include <array>
#include <complex>
#include <vector>

#include "snse/grid.hpp"

namespace snse {

enum class Rep { physical, spectral };

// Real scalar field on the torus, held in exactly one representation at a
// time. The spectral representation is the r2c half-space, Hermitian by
// construction.
class ScalarField {
 public:
  explicit ScalarField(GridPtr grid, Rep rep = Rep::physical);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const GridSpec& spec() const { return grid_->spec(); }
  Rep rep() const { return rep_; }

  std::vector<double>& phys();
  const std::vector<double>& phys() const;
  std::vector<std::complex<double>>& spectral();
  const std::vector<std::complex<double>>& spectral() const;

  void to_physical();
  void to_spectral();

  // Sets every coefficient/sample to zero in the current representation.
  void set_zero();

  bool finite() const;

 private:
  GridPtr grid_;
  Rep rep_;
  std::vector<double> phys_;
  std::vector<std::complex<double>> spec_;
};

// Representation-flip operation; inverse(forward(f)) == f to 1e-12.
ScalarField transform(const ScalarField& f, Rep direction);

// 3-component velocity field; all components share one grid.
class VectorField {
 public:
  explicit VectorField(GridPtr grid, Rep rep = Rep::physical);

  const Grid& grid() const { return comps_[0].grid(); }
  const GridPtr& grid_ptr() const { return comps_[0].grid_ptr(); }
  const GridSpec& spec() const { return comps_[0].spec(); }
  Rep rep() const { return comps_[0].rep(); }

  ScalarField& operator[](int j) { return comps_[j]; }
  const ScalarField& operator[](int j) const { return comps_[j]; }

  void to_physical();
  void to_spectral();
  void set_zero();
  bool finite() const;

  // this += a * other; both fields must be spectral on the same grid.
  void axpy(double a, const VectorField& other);

 private:
  std::array<ScalarField, 3> comps_;
};

}  // namespace snse
