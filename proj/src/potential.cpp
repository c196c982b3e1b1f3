#include "schro/potential.hpp"

#include <cmath>
#include <numbers>

#include "schro/errors.hpp"

namespace schro {

namespace {

constexpr double kPi = std::numbers::pi;

// Minimal-image lattice offset on the padded axis of length p.
inline int wrap_distance(int j, int p) { return std::min(j, p - j); }

std::vector<double> time_derivative_density(const WaveField& psi,
                                            const PotentialField& V) {
  // d|psi|^2/dt = 2 Re(conj(psi) * i * (laplacian(psi)/2 - V psi))
  WaveField lap = spectral_laplacian(psi);
  std::vector<double> out(psi.values.size());
  for (std::size_t l = 0; l < out.size(); ++l) {
    const cplx dpsi =
        cplx(0.0, 1.0) * (0.5 * lap.values[l] - V.values[l] * psi.values[l]);
    out[l] = 2.0 * (std::conj(psi.values[l]) * dpsi).real();
  }
  return out;
}

}  // namespace

FreeSpacePoisson::FreeSpacePoisson(GridPtr grid) : grid_(std::move(grid)) {
  const Grid& g = *grid_;
  const int n = g.points_per_axis;
  padded_n_ = 2 * n;
  const double dx = g.spacing;

  std::vector<cplx> kernel;
  if (g.dim == 1) {
    kernel.resize(padded_n_);
    for (int j = 0; j < padded_n_; ++j) {
      const double d = wrap_distance(j, padded_n_) * dx;
      kernel[j] = 0.5 * d;
    }
    // Cell average of |x|/2 over [-dx/2, dx/2].
    kernel[0] = dx / 8.0;
  } else {
    kernel.resize(static_cast<std::size_t>(padded_n_) * padded_n_);
    for (int i = 0; i < padded_n_; ++i) {
      for (int j = 0; j < padded_n_; ++j) {
        const double rx = wrap_distance(i, padded_n_) * dx;
        const double ry = wrap_distance(j, padded_n_) * dx;
        const double r = std::hypot(rx, ry);
        kernel[static_cast<std::size_t>(i) * padded_n_ + j] =
            std::log(r) / (2.0 * kPi);
      }
    }
    // Average of ln(r)/(2 pi) over an equal-area disk of radius dx/sqrt(pi).
    kernel[0] = (std::log(dx / std::sqrt(kPi)) - 0.5) / (2.0 * kPi);
  }

  kernel_hat_.resize(kernel.size());
  detail::dft_forward(g.dim, padded_n_, kernel.data(), kernel_hat_.data());
}

std::vector<double> FreeSpacePoisson::solve(
    const std::vector<double>& rho) const {
  const Grid& g = *grid_;
  if (rho.size() != g.size) {
    throw ConfigError("density shape does not match the solver grid");
  }
  const int n = g.points_per_axis;
  const int p = padded_n_;
  const std::size_t padded_size = kernel_hat_.size();

  std::vector<cplx> work(padded_size, cplx(0.0, 0.0));
  if (g.dim == 1) {
    for (int j = 0; j < n; ++j) {
      work[j] = rho[j];
    }
  } else {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        work[static_cast<std::size_t>(i) * p + j] = rho[g.index(i, j)];
      }
    }
  }

  std::vector<cplx> hat(padded_size);
  detail::dft_forward(g.dim, p, work.data(), hat.data());
  for (std::size_t m = 0; m < padded_size; ++m) {
    hat[m] *= kernel_hat_[m];
  }
  detail::dft_backward(g.dim, p, hat.data(), work.data());

  // 1/P^dim from the unnormalized backward transform, dx^dim as quadrature
  // weight of the convolution integral.
  const double scale = g.cell_volume() / static_cast<double>(padded_size);
  std::vector<double> out(g.size);
  if (g.dim == 1) {
    for (int j = 0; j < n; ++j) {
      out[j] = work[j].real() * scale;
    }
  } else {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        out[g.index(i, j)] =
            work[static_cast<std::size_t>(i) * p + j].real() * scale;
      }
    }
  }
  return out;
}

PotentialModel::PotentialModel(PotentialKind kind, GridPtr grid)
    : kind_(kind), grid_(std::move(grid)) {
  if (kind_.equation == EquationKind::Sn) {
    poisson_ = std::make_shared<const FreeSpacePoisson>(grid_);
  }
}

PotentialField PotentialModel::eval(const WaveField& psi) const {
  PotentialField V;
  V.grid = psi.grid;
  if (kind_.equation == EquationKind::Nls) {
    V.values.resize(psi.values.size());
    kernels::abs_squared(psi.values, V.values);
    kernels::scale_real(kind_.g, V.values, V.values);
  } else {
    std::vector<double> rho(psi.values.size());
    kernels::abs_squared(psi.values, rho);
    kernels::scale_real(kind_.g, rho, rho);
    V.values = poisson_->solve(rho);
  }
  return V;
}

PotentialField PotentialModel::eval_time_derivative(
    const WaveField& psi, const PotentialField& V) const {
  std::vector<double> drho = time_derivative_density(psi, V);
  PotentialField out;
  out.grid = psi.grid;
  if (kind_.equation == EquationKind::Nls) {
    out.values.resize(drho.size());
    kernels::scale_real(kind_.g, drho, out.values);
  } else {
    kernels::scale_real(kind_.g, drho, drho);
    out.values = poisson_->solve(drho);
  }
  return out;
}

double PotentialModel::energy(const WaveField& psi) const {
  const Grid& g = *psi.grid;
  SpectralField hat = forward(psi);
  double kinetic = 0.0;
  for (std::size_t m = 0; m < hat.values.size(); ++m) {
    kinetic += 0.5 * g.k_squared[m] * std::norm(hat.values[m]);
  }
  kinetic *= g.cell_volume() / static_cast<double>(g.size);

  double interaction = 0.0;
  if (kind_.equation == EquationKind::Nls) {
    for (const cplx& z : psi.values) {
      const double w = std::norm(z);
      interaction += 0.5 * kind_.g * w * w;
    }
  } else {
    PotentialField V = eval(psi);
    for (std::size_t l = 0; l < psi.values.size(); ++l) {
      interaction += 0.5 * V.values[l] * std::norm(psi.values[l]);
    }
  }
  interaction *= g.cell_volume();
  return kinetic + interaction;
}

PotentialField eval_potential(const PotentialKind& kind, const WaveField& psi) {
  return PotentialModel(kind, psi.grid).eval(psi);
}

PotentialField eval_potential_time_derivative(const PotentialKind& kind,
                                              const WaveField& psi,
                                              const PotentialField& V) {
  return PotentialModel(kind, psi.grid).eval_time_derivative(psi, V);
}

double energy(const PotentialKind& kind, const WaveField& psi) {
  return PotentialModel(kind, psi.grid).energy(psi);
}

bool blowup_guard(const WaveField& psi, double threshold) {
  if (!kernels::all_finite(psi.values)) {
    return true;
  }
  return kernels::max_abs(psi.values) > threshold;
}

}  // namespace schro
