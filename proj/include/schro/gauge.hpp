#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "schro/potential.hpp"
#include "schro/spectral.hpp"

namespace schro {

// Per-step choice of the gauge constant added to the potential.
struct NumericSearchConfig {
  double tolerance = 1e-3;  // absolute tolerance on C
  int max_evaluations = 32;
};

struct GaugeStrategy {
  enum class Kind { Zero, NearOptimal, HeunOptimal, NumericOptimal, Constant };
  Kind kind = Kind::Zero;
  double constant = 0.0;  // Constant only
  NumericSearchConfig search;

  static GaugeStrategy zero() { return {}; }
  static GaugeStrategy near_optimal() { return {Kind::NearOptimal, 0.0, {}}; }
  static GaugeStrategy heun_optimal() { return {Kind::HeunOptimal, 0.0, {}}; }
  static GaugeStrategy numeric_optimal(NumericSearchConfig cfg = {}) {
    return {Kind::NumericOptimal, 0.0, cfg};
  }
  static GaugeStrategy fixed(double c) { return {Kind::Constant, c, {}}; }
};

// Accumulated phase sum(C_j h_j) over accepted steps; makes every gauge
// rotation exactly reversible at output time.
struct GaugeLedger {
  double accumulated_phase = 0.0;
  std::vector<std::pair<double, double>> history;  // (C_j, h_j)

  void accumulate(double c, double h) {
    accumulated_phase += c * h;
    history.emplace_back(c, h);
  }
};

// Density-weighted mean of -V; minimizer of sum (V+C)^2 |psi|^2.
// Throws ZeroMassError when sum |psi|^2 == 0.
double near_optimal_c(const WaveField& psi, const PotentialField& V);

// beta = i dV/dt psi + grad(V).grad(psi) + laplacian(V) psi / 2,
// with all derivatives spectral (any dimension).
WaveField heun_beta(const WaveField& psi, const PotentialField& V,
                    const PotentialField& dtV);

// Global minimizer of E(C) = sum (V+C)^4 |psi|^2 + 2 (V+C)^2 Re(psi conj(beta))
// + |beta|^2, found from the real roots of the cubic dE/dC = 0. Ties pick the
// smallest |C|. Throws ZeroMassError for a zero-mass field.
double heun_optimal_c(const WaveField& psi, const PotentialField& V,
                      const WaveField& beta);

// Quartic error polynomial above, for tests and scan oracles.
double heun_error_polynomial(const WaveField& psi, const PotentialField& V,
                             const WaveField& beta, double c);

// Golden-section minimization of an arbitrary error evaluator over
// [lo, hi]. A constant evaluator returns the bracket midpoint. Non-finite
// evaluator output returns NaN; the stepper treats that as strategy failure
// and falls back.
double numeric_optimal_c(const std::function<double(double)>& error_evaluator,
                         double lo, double hi,
                         const NumericSearchConfig& cfg = {});

// psi * exp(+i phi): restores the zero-gauge state (the evolved state
// carries exp(-i phi)).
WaveField ledger_unwind(const WaveField& psi, const GaugeLedger& ledger);

// Density-weighted standard deviation of V, used for the numeric-search
// default bracket.
double weighted_potential_spread(const WaveField& psi, const PotentialField& V);

}  // namespace schro
