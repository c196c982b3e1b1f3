#pragma once

#include <complex>
#include <cstddef>
#include <span>

// Data-parallel pointwise kernels. Every kernel has a serial reference path
// and an OpenMP path selected by Exec; the two must produce bit-identical
// results (the parallel paths only split independent elementwise loops).
// Reductions are deliberately serial so step sequences stay deterministic
// regardless of thread count.

namespace schro::kernels {

using cplx = std::complex<double>;

enum class Exec { Serial, Parallel };

// Parallel when built with OpenMP, Serial otherwise.
Exec default_exec();

// out[m] = in[m] * exp(i * scale * k2[m])
void phase_rotate(std::span<const cplx> in, std::span<const double> k2,
                  double scale, std::span<cplx> out,
                  Exec exec = default_exec());

// v[m] *= exp(i * scale * k2[m])
void phase_rotate_inplace(std::span<cplx> v, std::span<const double> k2,
                          double scale, Exec exec = default_exec());

// out[l] = a * (V[l] + c) * psi[l]
void shifted_potential_apply(std::span<const double> V, double c, cplx a,
                             std::span<const cplx> psi, std::span<cplx> out,
                             Exec exec = default_exec());

// y[l] += a * x[l]
void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y,
          Exec exec = default_exec());

// out[l] = |psi[l]|^2
void abs_squared(std::span<const cplx> psi, std::span<double> out,
                 Exec exec = default_exec());

// out[l] = a * w[l]
void scale_real(double a, std::span<const double> w, std::span<double> out,
                Exec exec = default_exec());

// v[l] *= a
void scale_inplace(cplx a, std::span<cplx> v, Exec exec = default_exec());

// Serial reductions (deterministic summation order).
double sum_abs_squared(std::span<const cplx> v);
bool all_finite(std::span<const cplx> v);
double max_abs(std::span<const cplx> v);

}  // namespace schro::kernels
