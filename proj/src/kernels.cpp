#include "schro/kernels.hpp"

#include <cmath>

namespace schro::kernels {

Exec default_exec() {
#ifdef _OPENMP
  return Exec::Parallel;
#else
  return Exec::Serial;
#endif
}

namespace {
// OpenMP is worthwhile only above a few thousand elements; below that the
// fork/join overhead dominates.
constexpr std::size_t kParallelCutoff = 4096;

inline bool parallel(Exec exec, std::size_t n) {
#ifdef _OPENMP
  return exec == Exec::Parallel && n >= kParallelCutoff;
#else
  (void)exec;
  (void)n;
  return false;
#endif
}
}  // namespace

void phase_rotate(std::span<const cplx> in, std::span<const double> k2,
                  double scale, std::span<cplx> out, Exec exec) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(in.size());
  if (parallel(exec, in.size())) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t m = 0; m < n; ++m) {
      out[m] = in[m] * std::polar(1.0, scale * k2[m]);
    }
  } else {
    for (std::ptrdiff_t m = 0; m < n; ++m) {
      out[m] = in[m] * std::polar(1.0, scale * k2[m]);
    }
  }
}

void phase_rotate_inplace(std::span<cplx> v, std::span<const double> k2,
                          double scale, Exec exec) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(v.size());
  if (parallel(exec, v.size())) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t m = 0; m < n; ++m) {
      v[m] *= std::polar(1.0, scale * k2[m]);
    }
  } else {
    for (std::ptrdiff_t m = 0; m < n; ++m) {
      v[m] *= std::polar(1.0, scale * k2[m]);
    }
  }
}

void shifted_potential_apply(std::span<const double> V, double c, cplx a,
                             std::span<const cplx> psi, std::span<cplx> out,
                             Exec exec) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(psi.size());
  if (parallel(exec, psi.size())) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t l = 0; l < n; ++l) {
      out[l] = a * (V[l] + c) * psi[l];
    }
  } else {
    for (std::ptrdiff_t l = 0; l < n; ++l) {
      out[l] = a * (V[l] + c) * psi[l];
    }
  }
}

void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y, Exec exec) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
  if (parallel(exec, x.size())) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t l = 0; l < n; ++l) {
      y[l] += a * x[l];
    }
  } else {
    for (std::ptrdiff_t l = 0; l < n; ++l) {
      y[l] += a * x[l];
    }
  }
}

void abs_squared(std::span<const cplx> psi, std::span<double> out, Exec exec) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(psi.size());
  if (parallel(exec, psi.size())) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t l = 0; l < n; ++l) {
      out[l] = std::norm(psi[l]);
    }
  } else {
    for (std::ptrdiff_t l = 0; l < n; ++l) {
      out[l] = std::norm(psi[l]);
    }
  }
}

void scale_real(double a, std::span<const double> w, std::span<double> out,
                Exec exec) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(w.size());
  if (parallel(exec, w.size())) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t l = 0; l < n; ++l) {
      out[l] = a * w[l];
    }
  } else {
    for (std::ptrdiff_t l = 0; l < n; ++l) {
      out[l] = a * w[l];
    }
  }
}

void scale_inplace(cplx a, std::span<cplx> v, Exec exec) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(v.size());
  if (parallel(exec, v.size())) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t l = 0; l < n; ++l) {
      v[l] *= a;
    }
  } else {
    for (std::ptrdiff_t l = 0; l < n; ++l) {
      v[l] *= a;
    }
  }
}

double sum_abs_squared(std::span<const cplx> v) {
  double s = 0.0;
  for (const cplx& z : v) {
    s += std::norm(z);
  }
  return s;
}

bool all_finite(std::span<const cplx> v) {
  for (const cplx& z : v) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      return false;
    }
  }
  return true;
}

double max_abs(std::span<const cplx> v) {
  double m = 0.0;
  for (const cplx& z : v) {
    m = std::max(m, std::abs(z));
  }
  return m;
}

}  // namespace schro::kernels
