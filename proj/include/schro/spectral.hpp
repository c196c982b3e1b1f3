#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "schro/kernels.hpp"

namespace schro {

using cplx = std::complex<double>;

// Uniform periodic grid, 1D or 2D, square box, power-of-two resolution.
// Coordinates are centered: x in [-L/2, L/2). Wavenumbers k_m = 2*pi*m/L are
// stored in standard DFT order. Immutable after construction; fields keep a
// shared_ptr to it.
struct Grid {
  int dim = 1;
  int points_per_axis = 0;
  double box_length = 0.0;
  double spacing = 0.0;                 // L / points_per_axis
  std::size_t size = 0;                 // points_per_axis^dim
  std::vector<double> coords;           // per-axis node coordinates
  std::vector<double> wavenumbers;      // per-axis k_m, DFT order
  std::vector<double> k_squared;        // |k|^2 per flattened mode

  // 2D fields are row-major: index = ix * points_per_axis + iy.
  std::size_t index(int ix, int iy = 0) const {
    return static_cast<std::size_t>(ix) * points_per_axis + iy;
  }
  double cell_volume() const;
};

using GridPtr = std::shared_ptr<const Grid>;

// Throws ConfigError for dim not in {1,2}, non power-of-two resolution,
// resolution below 4, or nonpositive box length.
GridPtr make_grid(int dim, int points_per_axis, double box_length);

struct WaveField {
  GridPtr grid;
  std::vector<cplx> values;
};

struct SpectralField {
  GridPtr grid;
  std::vector<cplx> values;
};

WaveField make_field(GridPtr grid);

// DFT convention: forward is the plain unnormalized DFT (e^{-ikx} sum),
// inverse carries the 1/M factor, so inverse(forward(f)) == f and
// (1/M) sum_m |fhat_m|^2 == sum_l |f_l|^2 (Parseval).
SpectralField forward(const WaveField& field);
WaveField inverse(const SpectralField& field);

// inverse(i * k_axis * forward(field))
WaveField spectral_gradient(const WaveField& field, int axis);

// inverse(-|k|^2 * forward(field))
WaveField spectral_laplacian(const WaveField& field);

// sum_l |f_l|^2 * dx^dim
double mass(const WaveField& field);

namespace detail {
// Raw transforms on caller buffers for arbitrary (dim, n), sharing the
// module's plan cache (FFTW planning is serialized behind one mutex).
// backward is unnormalized; callers scale by 1/n^dim.
void dft_forward(int dim, int n, const cplx* in, cplx* out);
void dft_backward(int dim, int n, const cplx* in, cplx* out);
}  // namespace detail

}  // namespace schro
