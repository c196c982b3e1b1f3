#pragma once

#include <limits>

#include "schro/gauge.hpp"
#include "schro/potential.hpp"
#include "schro/spectral.hpp"

namespace schro {

// Explicit embedded Runge-Kutta pair: b gives the order-p result, b_tilde the
// embedded order-(p-1) result.
struct ButcherTableau {
  int stages = 0;
  int order = 0;
  std::vector<std::vector<double>> a;  // lower triangular, stages x stages
  std::vector<double> b;
  std::vector<double> b_tilde;
  std::vector<double> c;
};

ButcherTableau heun_tableau();   // 2(1), p = 2
ButcherTableau dp54_tableau();   // Dormand-Prince 5(4), p = 5

// Throws ConfigError when row sums, weight sums, or the embedded difference
// are inconsistent.
void validate(const ButcherTableau& tableau);

struct StepControl {
  double safety = 0.9;
  double growth = 5.0;   // max factor per step
  double shrink = 0.1;   // min factor per step
  double h_min = 1e-12;
  double h_max = std::numeric_limits<double>::infinity();
  double delta_floor = 1e-10;  // stands in for delta == 0
};

// h_next = clamp(safety * h * delta^(-0.7/p) * delta_prev^(0.4/p)).
double pi_controller(double h, double delta, double delta_prev, int order,
                     const StepControl& control = {});

// Scaled error norm between the two embedded results:
// sqrt( (1/M) sum_m (|hi - lo| / (tol + max(|hi|,|lo|) * tol))^2 ).
double error_norm(const SpectralField& phi_high, const SpectralField& phi_low,
                  double tol);

// Integrating-factor right-hand side, anchored at the step start: with
// tau = t - t_n,
//   psi  = inverse(exp(-i k^2 tau / 2) * phi)
//   f    = -i exp(+i k^2 tau / 2) * forward((V(psi) + C) * psi)
// Each call bumps *evaluations.
class IfRhs {
 public:
  IfRhs(const PotentialModel& model, double gauge_c, long* evaluations)
      : model_(&model), gauge_c_(gauge_c), evaluations_(evaluations) {}

  SpectralField operator()(double tau, const SpectralField& phi) const;

 private:
  const PotentialModel* model_;
  double gauge_c_;
  long* evaluations_;
};

struct EmbeddedResult {
  SpectralField high;
  SpectralField low;
  bool finite = true;  // false when a stage went non-finite
};

using RhsFn = std::function<SpectralField(double tau, const SpectralField&)>;

// One explicit embedded RK step of size h from the anchor (tau = 0).
EmbeddedResult embedded_step(const SpectralField& phi_n, double h,
                             const ButcherTableau& tableau, const RhsFn& rhs);

struct StepperOptions {
  double tol = 1e-7;
  double accept_threshold = 1.0;  // on the scaled norm; see README
  StepControl control;
};

struct StepperState {
  double t = 0.0;
  double h = 0.0;
  WaveField psi;
  double delta_prev = 1.0;
  GaugeLedger ledger;
  long n_accepted = 0;
  long n_rejected = 0;
  long rhs_evaluations = 0;
};

struct StepRecord {
  double t = 0.0;   // step start
  double h = 0.0;   // attempted size
  double c = 0.0;   // gauge constant used
  double delta = 0.0;
  bool accepted = false;
};

// Accept/reject loop body. Each advance() is one attempted time-loop:
// evaluate V, pick C_n, re-anchor the integrating factor at t_n, take one
// embedded step, then accept (and rotate back by exp(-i k^2 h / 2)) or
// reject, updating h through the PI controller either way.
class Stepper {
 public:
  Stepper(ButcherTableau tableau, PotentialModel model, GaugeStrategy strategy,
          StepperOptions options);

  // Throws StepUnderflowError when a rejected step cannot shrink further.
  StepRecord advance(StepperState& state) const;

  const ButcherTableau& tableau() const { return tableau_; }
  const StepperOptions& options() const { return options_; }

 private:
  double select_gauge(StepperState& state, const PotentialField& V,
                      const SpectralField& phi_n) const;

  ButcherTableau tableau_;
  PotentialModel model_;
  GaugeStrategy strategy_;
  StepperOptions options_;
};

// Fixed-step driver with the same per-step re-anchoring, no adaptivity.
// Used for convergence-order checks.
WaveField integrate_fixed(const WaveField& psi0, double t0, double t1,
                          double h, const ButcherTableau& tableau,
                          const PotentialModel& model, double gauge_c = 0.0);

}  // namespace schro
