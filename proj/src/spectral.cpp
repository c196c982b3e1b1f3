#include "schro/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "schro/errors.hpp"

namespace schro {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Cached out-of-place FFTW plans per (dim, n). Planning is not thread-safe,
// execution via fftw_execute_dft is; plans use FFTW_UNALIGNED so they can run
// on any buffer pair.
class Dft {
 public:
  Dft(int dim, int n) {
    std::vector<cplx> a(static_cast<std::size_t>(std::pow(n, dim)));
    std::vector<cplx> b(a.size());
    auto* pa = reinterpret_cast<fftw_complex*>(a.data());
    auto* pb = reinterpret_cast<fftw_complex*>(b.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    if (dim == 1) {
      fwd_ = fftw_plan_dft_1d(n, pa, pb, FFTW_FORWARD, flags);
      bwd_ = fftw_plan_dft_1d(n, pa, pb, FFTW_BACKWARD, flags);
    } else {
      fwd_ = fftw_plan_dft_2d(n, n, pa, pb, FFTW_FORWARD, flags);
      bwd_ = fftw_plan_dft_2d(n, n, pa, pb, FFTW_BACKWARD, flags);
    }
  }
  ~Dft() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }
  Dft(const Dft&) = delete;
  Dft& operator=(const Dft&) = delete;

  void forward(const cplx* in, cplx* out) const {
    fftw_execute_dft(fwd_,
                     reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
  }
  void backward(const cplx* in, cplx* out) const {
    fftw_execute_dft(bwd_,
                     reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
  }

 private:
  fftw_plan fwd_;
  fftw_plan bwd_;
};

const Dft& dft_for(int dim, int n) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<Dft>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{dim, n}];
  if (!slot) {
    slot = std::make_unique<Dft>(dim, n);
  }
  return *slot;
}

void check_shape(const GridPtr& grid, std::size_t n) {
  if (!grid || grid->size != n) {
    throw ConfigError("field shape does not match its grid");
  }
}

}  // namespace

double Grid::cell_volume() const { return std::pow(spacing, dim); }

GridPtr make_grid(int dim, int points_per_axis, double box_length) {
  if (dim != 1 && dim != 2) {
    throw ConfigError("grid dim must be 1 or 2");
  }
  if (points_per_axis < 4 || !is_power_of_two(points_per_axis)) {
    throw ConfigError("points_per_axis must be a power of two >= 4");
  }
  if (!(box_length > 0.0)) {
    throw ConfigError("box_length must be positive");
  }
  auto g = std::make_shared<Grid>();
  g->dim = dim;
  g->points_per_axis = points_per_axis;
  g->box_length = box_length;
  g->spacing = box_length / points_per_axis;
  g->size = static_cast<std::size_t>(std::pow(points_per_axis, dim));

  const int n = points_per_axis;
  g->coords.resize(n);
  g->wavenumbers.resize(n);
  const double dk = 2.0 * std::numbers::pi / box_length;
  for (int m = 0; m < n; ++m) {
    g->coords[m] = -0.5 * box_length + m * g->spacing;
    const int signed_m = (m < n / 2) ? m : m - n;
    g->wavenumbers[m] = dk * signed_m;
  }

  g->k_squared.resize(g->size);
  if (dim == 1) {
    for (int m = 0; m < n; ++m) {
      g->k_squared[m] = g->wavenumbers[m] * g->wavenumbers[m];
    }
  } else {
    for (int mx = 0; mx < n; ++mx) {
      for (int my = 0; my < n; ++my) {
        const double kx = g->wavenumbers[mx];
        const double ky = g->wavenumbers[my];
        g->k_squared[g->index(mx, my)] = kx * kx + ky * ky;
      }
    }
  }
  return g;
}

WaveField make_field(GridPtr grid) {
  WaveField f;
  f.values.assign(grid->size, cplx(0.0, 0.0));
  f.grid = std::move(grid);
  return f;
}

SpectralField forward(const WaveField& field) {
  check_shape(field.grid, field.values.size());
  SpectralField out;
  out.grid = field.grid;
  out.values.resize(field.values.size());
  dft_for(field.grid->dim, field.grid->points_per_axis)
      .forward(field.values.data(), out.values.data());
  return out;
}

WaveField inverse(const SpectralField& field) {
  check_shape(field.grid, field.values.size());
  WaveField out;
  out.grid = field.grid;
  out.values.resize(field.values.size());
  dft_for(field.grid->dim, field.grid->points_per_axis)
      .backward(field.values.data(), out.values.data());
  kernels::scale_inplace(1.0 / static_cast<double>(field.grid->size),
                         out.values);
  return out;
}

WaveField spectral_gradient(const WaveField& field, int axis) {
  const Grid& g = *field.grid;
  if (axis < 0 || axis >= g.dim) {
    throw ConfigError("gradient axis out of range");
  }
  SpectralField hat = forward(field);
  const int n = g.points_per_axis;
  if (g.dim == 1) {
    for (int m = 0; m < n; ++m) {
      hat.values[m] *= cplx(0.0, g.wavenumbers[m]);
    }
  } else {
    for (int mx = 0; mx < n; ++mx) {
      for (int my = 0; my < n; ++my) {
        const double k = (axis == 0) ? g.wavenumbers[mx] : g.wavenumbers[my];
        hat.values[g.index(mx, my)] *= cplx(0.0, k);
      }
    }
  }
  return inverse(hat);
}

WaveField spectral_laplacian(const WaveField& field) {
  SpectralField hat = forward(field);
  for (std::size_t m = 0; m < hat.values.size(); ++m) {
    hat.values[m] *= -field.grid->k_squared[m];
  }
  return inverse(hat);
}

double mass(const WaveField& field) {
  return kernels::sum_abs_squared(field.values) * field.grid->cell_volume();
}

namespace detail {

void dft_forward(int dim, int n, const cplx* in, cplx* out) {
  dft_for(dim, n).forward(in, out);
}

void dft_backward(int dim, int n, const cplx* in, cplx* out) {
  dft_for(dim, n).backward(in, out);
}

}  // namespace detail

}  // namespace schro
