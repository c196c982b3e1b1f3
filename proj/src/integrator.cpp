#include "schro/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "schro/errors.hpp"

namespace schro {

ButcherTableau heun_tableau() {
  ButcherTableau t;
  t.stages = 2;
  t.order = 2;
  t.a = {{0.0, 0.0}, {1.0, 0.0}};
  t.b = {0.5, 0.5};
  t.b_tilde = {1.0, 0.0};
  t.c = {0.0, 1.0};
  return t;
}

ButcherTableau dp54_tableau() {
  ButcherTableau t;
  t.stages = 7;
  t.order = 5;
  t.a = {
      {},
      {1.0 / 5},
      {3.0 / 40, 9.0 / 40},
      {44.0 / 45, -56.0 / 15, 32.0 / 9},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
       -5103.0 / 18656},
      {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
  };
  for (auto& row : t.a) {
    row.resize(t.stages, 0.0);
  }
  t.b = {35.0 / 384,      0.0,        500.0 / 1113, 125.0 / 192,
         -2187.0 / 6784,  11.0 / 84,  0.0};
  t.b_tilde = {5179.0 / 57600,    0.0,          7571.0 / 16695, 393.0 / 640,
               -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};
  t.c = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  return t;
}

void validate(const ButcherTableau& t) {
  const auto bad = [](const std::string& what) { throw ConfigError(what); };
  if (t.stages < 1 || t.order < 1 ||
      t.a.size() != static_cast<std::size_t>(t.stages) ||
      t.b.size() != static_cast<std::size_t>(t.stages) ||
      t.b_tilde.size() != static_cast<std::size_t>(t.stages) ||
      t.c.size() != static_cast<std::size_t>(t.stages)) {
    bad("tableau shape mismatch");
  }
  double sb = 0.0, sbt = 0.0, dmax = 0.0;
  for (int l = 0; l < t.stages; ++l) {
    sb += t.b[l];
    sbt += t.b_tilde[l];
    dmax = std::max(dmax, std::abs(t.b[l] - t.b_tilde[l]));
    double row = 0.0;
    for (int r = 0; r < l; ++r) {
      row += t.a[l][r];
    }
    if (std::abs(row - t.c[l]) > 1e-12) {
      bad("tableau row sums do not match c");
    }
  }
  if (std::abs(sb - 1.0) > 1e-12 || std::abs(sbt - 1.0) > 1e-12) {
    bad("tableau weights do not sum to one");
  }
  if (dmax == 0.0) {
    bad("tableau has no embedded error estimate");
  }
}

double pi_controller(double h, double delta, double delta_prev, int order,
                     const StepControl& control) {
  const double p = static_cast<double>(order);
  const double d = std::max(delta, control.delta_floor);
  const double dp = std::max(delta_prev, control.delta_floor);
  double factor =
      control.safety * std::pow(d, -0.7 / p) * std::pow(dp, 0.4 / p);
  if (!std::isfinite(factor)) {
    factor = control.shrink;
  }
  factor = std::clamp(factor, control.shrink, control.growth);
  return std::clamp(h * factor, control.h_min, control.h_max);
}

double error_norm(const SpectralField& phi_high, const SpectralField& phi_low,
                  double tol) {
  const std::size_t m = phi_high.values.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double diff = std::abs(phi_high.values[i] - phi_low.values[i]);
    const double scale =
        tol + std::max(std::abs(phi_high.values[i]),
                       std::abs(phi_low.values[i])) *
                  tol;
    const double r = diff / scale;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(m));
}

SpectralField IfRhs::operator()(double tau, const SpectralField& phi) const {
  ++(*evaluations_);
  const Grid& g = *phi.grid;

  SpectralField psi_hat;
  psi_hat.grid = phi.grid;
  psi_hat.values.resize(phi.values.size());
  kernels::phase_rotate(phi.values, g.k_squared, -0.5 * tau, psi_hat.values);
  WaveField psi = inverse(psi_hat);

  PotentialField V = model_->eval(psi);

  WaveField u;
  u.grid = phi.grid;
  u.values.resize(phi.values.size());
  kernels::shifted_potential_apply(V.values, gauge_c_, cplx(0.0, -1.0),
                                   psi.values, u.values);
  SpectralField f = forward(u);
  kernels::phase_rotate_inplace(f.values, g.k_squared, 0.5 * tau);
  return f;
}

EmbeddedResult embedded_step(const SpectralField& phi_n, double h,
                             const ButcherTableau& tableau, const RhsFn& rhs) {
  std::vector<std::vector<cplx>> w(tableau.stages);
  SpectralField stage_in;
  stage_in.grid = phi_n.grid;

  for (int l = 0; l < tableau.stages; ++l) {
    stage_in.values = phi_n.values;
    for (int r = 0; r < l; ++r) {
      if (tableau.a[l][r] != 0.0) {
        kernels::axpy(tableau.a[l][r], w[r], stage_in.values);
      }
    }
    SpectralField f = rhs(tableau.c[l] * h, stage_in);
    if (!kernels::all_finite(f.values)) {
      EmbeddedResult out;
      out.finite = false;
      return out;
    }
    w[l] = std::move(f.values);
    kernels::scale_inplace(h, w[l]);
  }

  EmbeddedResult out;
  out.high.grid = phi_n.grid;
  out.low.grid = phi_n.grid;
  out.high.values = phi_n.values;
  out.low.values = phi_n.values;
  for (int l = 0; l < tableau.stages; ++l) {
    if (tableau.b[l] != 0.0) {
      kernels::axpy(tableau.b[l], w[l], out.high.values);
    }
    if (tableau.b_tilde[l] != 0.0) {
      kernels::axpy(tableau.b_tilde[l], w[l], out.low.values);
    }
  }
  return out;
}

Stepper::Stepper(ButcherTableau tableau, PotentialModel model,
                 GaugeStrategy strategy, StepperOptions options)
    : tableau_(std::move(tableau)),
      model_(std::move(model)),
      strategy_(strategy),
      options_(options) {
  validate(tableau_);
  if (strategy_.kind == GaugeStrategy::Kind::HeunOptimal &&
      (tableau_.stages != 2 || tableau_.order != 2)) {
    throw ConfigError(
        "the heun_optimal gauge is specific to the 2(1) Heun tableau");
  }
}

double Stepper::select_gauge(StepperState& state, const PotentialField& V,
                             const SpectralField& phi_n) const {
  using Kind = GaugeStrategy::Kind;
  try {
    switch (strategy_.kind) {
      case Kind::Zero:
        return 0.0;
      case Kind::Constant:
        return strategy_.constant;
      case Kind::NearOptimal:
        return near_optimal_c(state.psi, V);
      case Kind::HeunOptimal: {
        PotentialField dtV = model_.eval_time_derivative(state.psi, V);
        WaveField beta = heun_beta(state.psi, V, dtV);
        return heun_optimal_c(state.psi, V, beta);
      }
      case Kind::NumericOptimal: {
        const double center = near_optimal_c(state.psi, V);
        const double sigma = weighted_potential_spread(state.psi, V);
        if (sigma == 0.0) {
          return center;
        }
        auto evaluator = [&](double c) {
          IfRhs rhs(model_, c, &state.rhs_evaluations);
          EmbeddedResult r = embedded_step(phi_n, state.h, tableau_, rhs);
          if (!r.finite) {
            return std::numeric_limits<double>::quiet_NaN();
          }
          return error_norm(r.high, r.low, options_.tol);
        };
        const double c = numeric_optimal_c(evaluator, center - 10.0 * sigma,
                                           center + 10.0 * sigma,
                                           strategy_.search);
        if (!std::isfinite(c)) {
          std::fprintf(stderr,
                       "warning: numeric gauge search failed at t=%g; using "
                       "the near-optimal value\n",
                       state.t);
          return center;
        }
        return c;
      }
    }
  } catch (const ZeroMassError& e) {
    std::fprintf(stderr, "warning: %s at t=%g; using C=0\n", e.what(),
                 state.t);
  }
  return 0.0;
}

StepRecord Stepper::advance(StepperState& state) const {
  const StepControl& control = options_.control;
  PotentialField V = model_.eval(state.psi);
  SpectralField phi_n = forward(state.psi);
  const double c = select_gauge(state, V, phi_n);

  StepRecord record;
  record.t = state.t;
  record.h = state.h;
  record.c = c;

  IfRhs rhs(model_, c, &state.rhs_evaluations);
  EmbeddedResult result = embedded_step(phi_n, state.h, tableau_, rhs);
  if (!result.finite) {
    record.delta = std::numeric_limits<double>::infinity();
    ++state.n_rejected;
    if (state.h <= control.h_min) {
      throw StepUnderflowError("step size underflow");
    }
    state.h = std::max(0.5 * state.h, control.h_min);
    return record;
  }

  const double delta = error_norm(result.high, result.low, options_.tol);
  record.delta = delta;
  const bool accepted =
      std::isfinite(delta) && delta <= options_.accept_threshold;
  double h_next =
      pi_controller(state.h, delta, state.delta_prev, tableau_.order, control);

  if (accepted) {
    kernels::phase_rotate_inplace(result.high.values, state.psi.grid->k_squared,
                                  -0.5 * state.h);
    state.psi = inverse(result.high);
    state.t += state.h;
    state.ledger.accumulate(c, state.h);
    ++state.n_accepted;
    state.delta_prev = std::max(delta, control.delta_floor);
    record.accepted = true;
  } else {
    ++state.n_rejected;
    if (state.h <= control.h_min) {
      throw StepUnderflowError("step size underflow");
    }
    h_next = std::min(h_next, state.h);
  }
  state.h = h_next;
  return record;
}

WaveField integrate_fixed(const WaveField& psi0, double t0, double t1,
                          double h, const ButcherTableau& tableau,
                          const PotentialModel& model, double gauge_c) {
  WaveField psi = psi0;
  long evals = 0;
  double t = t0;
  while (t < t1 - 1e-15 * std::max(1.0, std::abs(t1))) {
    const double step = std::min(h, t1 - t);
    SpectralField phi = forward(psi);
    IfRhs rhs(model, gauge_c, &evals);
    EmbeddedResult r = embedded_step(phi, step, tableau, rhs);
    kernels::phase_rotate_inplace(r.high.values, psi.grid->k_squared,
                                  -0.5 * step);
    psi = inverse(r.high);
    t += step;
  }
  return psi;
}

}  // namespace schro
