#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

namespace snse {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Periodic grid on [0, 2*pi)^3 with n points per axis. Physical storage is
// x-fastest row-major; spectral storage is the real-to-complex half-space
// with the x axis halved, so a spectral index holds kx in [0, n/2] and
// ky, kz as signed integer wavenumbers in [-n/2, n/2).
struct GridSpec {
  int n = 0;

  int nc() const { return n / 2 + 1; }
  double spacing() const { return kTwoPi / n; }
  double cell_volume() const {
    const double h = spacing();
    return h * h * h;
  }
  std::size_t phys_size() const {
    return static_cast<std::size_t>(n) * n * n;
  }
  std::size_t spec_size() const {
    return static_cast<std::size_t>(n) * n * nc();
  }
  bool valid() const { return n >= 8 && n % 2 == 0; }

  // fftfreq convention: integer wavenumbers in [-n/2, n/2).
  int wavenumber(int idx) const { return idx < n / 2 ? idx : idx - n; }

  std::size_t phys_index(int ix, int iy, int iz) const {
    return static_cast<std::size_t>(iz) * n * n +
           static_cast<std::size_t>(iy) * n + ix;
  }
  // Spectral index: ikx in [0, nc), iy/iz raw FFT indices in [0, n).
  std::size_t spec_index(int ikx, int iy, int iz) const {
    return (static_cast<std::size_t>(iz) * n + iy) * nc() + ikx;
  }

  bool operator==(const GridSpec& o) const { return n == o.n; }
};

class Grid {
 public:
  explicit Grid(GridSpec spec);

  const GridSpec& spec() const { return spec_; }
  int n() const { return spec_.n; }

  // 2/3-rule mask: true iff |k_j| < n/3 for every axis.
  const std::vector<std::uint8_t>& dealias_mask() const { return mask_; }

 private:
  GridSpec spec_;
  std::vector<std::uint8_t> mask_;
};

using GridPtr = std::shared_ptr<const Grid>;

// Grids are immutable and shareable across threads.
GridPtr make_grid(int n);

}  // namespace snse
