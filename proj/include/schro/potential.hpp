#pragma once

#include <optional>
#include <vector>

#include "schro/spectral.hpp"

namespace schro {

enum class EquationKind { Nls, Sn };

// NLS: V = g |psi|^2 (local).
// SN:  laplacian(V) = g |psi|^2 with free-space boundary conditions.
struct PotentialKind {
  EquationKind equation = EquationKind::Nls;
  double g = 0.0;
};

struct PotentialField {
  GridPtr grid;
  std::vector<double> values;
};

// Free-space Poisson solve, laplacian(V) = rho, by Green's-function
// convolution on a zero-padded doubled grid (Hockney). Kernels: |x|/2 in 1D,
// ln(r)/(2*pi) in 2D, with the r=0 sample replaced by the cell average. The
// kernel spectrum is precomputed in the constructor; solve() is const and
// allocates its own workspace, so one instance can serve concurrent calls.
class FreeSpacePoisson {
 public:
  explicit FreeSpacePoisson(GridPtr grid);

  std::vector<double> solve(const std::vector<double>& rho) const;

  const GridPtr& grid() const { return grid_; }

 private:
  GridPtr grid_;
  int padded_n_;
  std::vector<cplx> kernel_hat_;
};

PotentialField eval_potential(const PotentialKind& kind, const WaveField& psi);

// dV/dt through the chain rule: d|psi|^2/dt = 2 Re(conj(psi) dpsi/dt) with
// dpsi/dt = i (laplacian(psi)/2 - V psi). Requires V = eval_potential(kind, psi).
PotentialField eval_potential_time_derivative(const PotentialKind& kind,
                                              const WaveField& psi,
                                              const PotentialField& V);

// Kinetic term via Parseval plus g/2 |psi|^4 (NLS) or V/2 |psi|^2 (SN).
double energy(const PotentialKind& kind, const WaveField& psi);

// True when max|psi| exceeds the threshold or any value is non-finite.
bool blowup_guard(const WaveField& psi, double threshold);

// Bundles the kind with a cached Poisson solver so per-step evaluations do
// not rebuild the padded kernel. Pure value type, cheap to copy (shared grid
// and solver).
class PotentialModel {
 public:
  PotentialModel(PotentialKind kind, GridPtr grid);

  PotentialField eval(const WaveField& psi) const;
  PotentialField eval_time_derivative(const WaveField& psi,
                                      const PotentialField& V) const;
  double energy(const WaveField& psi) const;

  const PotentialKind& kind() const { return kind_; }

 private:
  PotentialKind kind_;
  GridPtr grid_;
  std::shared_ptr<const FreeSpacePoisson> poisson_;  // set for SN only
};

}  // namespace schro
