#include "schro/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "schro/errors.hpp"

namespace schro {

namespace {

WaveField complexify(const GridPtr& grid, const std::vector<double>& values) {
  WaveField f = make_field(grid);
  for (std::size_t l = 0; l < values.size(); ++l) {
    f.values[l] = values[l];
  }
  return f;
}

// Real roots of c3 x^3 + c2 x^2 + c1 x + c0, c3 != 0, by the closed form on
// the depressed cubic followed by one round of Newton polishing.
std::vector<double> real_cubic_roots(double c3, double c2, double c1,
                                     double c0) {
  const double p = c2 / c3;
  const double q = c1 / c3;
  const double r = c0 / c3;
  const double a = q - p * p / 3.0;
  const double b = 2.0 * p * p * p / 27.0 - p * q / 3.0 + r;

  std::vector<double> roots;
  const double disc = 0.25 * b * b + a * a * a / 27.0;
  if (disc > 0.0) {
    const double s = std::sqrt(disc);
    const double t = std::cbrt(-0.5 * b + s) + std::cbrt(-0.5 * b - s);
    roots.push_back(t - p / 3.0);
  } else if (a == 0.0 && b == 0.0) {
    roots.push_back(-p / 3.0);
  } else {
    const double m = 2.0 * std::sqrt(-a / 3.0);
    const double theta =
        std::acos(std::clamp(3.0 * b / (a * m), -1.0, 1.0)) / 3.0;
    for (int k = 0; k < 3; ++k) {
      const double t =
          m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0);
      roots.push_back(t - p / 3.0);
    }
  }

  for (double& x : roots) {
    for (int it = 0; it < 2; ++it) {
      const double f = ((c3 * x + c2) * x + c1) * x + c0;
      const double df = (3.0 * c3 * x + 2.0 * c2) * x + c1;
      if (df != 0.0 && std::isfinite(f / df)) {
        x -= f / df;
      }
    }
  }
  return roots;
}

}  // namespace

double near_optimal_c(const WaveField& psi, const PotentialField& V) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t l = 0; l < psi.values.size(); ++l) {
    const double w = std::norm(psi.values[l]);
    num += V.values[l] * w;
    den += w;
  }
  if (den <= 0.0) {
    throw ZeroMassError("near_optimal_c on a zero-mass field");
  }
  return -num / den;
}

WaveField heun_beta(const WaveField& psi, const PotentialField& V,
                    const PotentialField& dtV) {
  const GridPtr& grid = psi.grid;
  WaveField v = complexify(grid, V.values);
  WaveField lap_v = spectral_laplacian(v);

  WaveField beta = make_field(grid);
  for (std::size_t l = 0; l < beta.values.size(); ++l) {
    beta.values[l] = cplx(0.0, 1.0) * dtV.values[l] * psi.values[l] +
                     0.5 * lap_v.values[l] * psi.values[l];
  }
  for (int axis = 0; axis < grid->dim; ++axis) {
    WaveField dv = spectral_gradient(v, axis);
    WaveField dpsi = spectral_gradient(psi, axis);
    for (std::size_t l = 0; l < beta.values.size(); ++l) {
      beta.values[l] += dv.values[l] * dpsi.values[l];
    }
  }
  return beta;
}

double heun_error_polynomial(const WaveField& psi, const PotentialField& V,
                             const WaveField& beta, double c) {
  double e = 0.0;
  for (std::size_t l = 0; l < psi.values.size(); ++l) {
    const double s = V.values[l] + c;
    const double w = std::norm(psi.values[l]);
    const double cross = (psi.values[l] * std::conj(beta.values[l])).real();
    e += s * s * s * s * w + 2.0 * s * s * cross + std::norm(beta.values[l]);
  }
  return e;
}

double heun_optimal_c(const WaveField& psi, const PotentialField& V,
                      const WaveField& beta) {
  // dE/dC = 4 sum (V+C)^3 w + 4 sum (V+C) Re(psi conj(beta)) expands to a
  // cubic with leading coefficient sum w > 0.
  double sw = 0.0, swv = 0.0, swv2 = 0.0, swv3 = 0.0, sr = 0.0, srv = 0.0;
  for (std::size_t l = 0; l < psi.values.size(); ++l) {
    const double w = std::norm(psi.values[l]);
    const double v = V.values[l];
    const double r = (psi.values[l] * std::conj(beta.values[l])).real();
    sw += w;
    swv += w * v;
    swv2 += w * v * v;
    swv3 += w * v * v * v;
    sr += r;
    srv += r * v;
  }
  if (sw <= 0.0) {
    throw ZeroMassError("heun_optimal_c on a zero-mass field");
  }
  const auto roots =
      real_cubic_roots(sw, 3.0 * swv, 3.0 * swv2 + sr, swv3 + srv);

  double best_c = 0.0;
  double best_e = std::numeric_limits<double>::infinity();
  for (double c : roots) {
    if (!std::isfinite(c)) {
      continue;
    }
    const double e = heun_error_polynomial(psi, V, beta, c);
    if (e < best_e || (e == best_e && std::abs(c) < std::abs(best_c))) {
      best_e = e;
      best_c = c;
    }
  }
  return best_c;
}

double numeric_optimal_c(const std::function<double(double)>& error_evaluator,
                         double lo, double hi, const NumericSearchConfig& cfg) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (!(lo < hi)) {
    return 0.5 * (lo + hi);
  }
  constexpr double kInvPhi = 0.6180339887498949;
  const double mid0 = 0.5 * (lo + hi);

  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = error_evaluator(x1);
  double f2 = error_evaluator(x2);
  int evals = 2;
  bool flat = true;
  double f_min = std::min(f1, f2), f_max = std::max(f1, f2);

  while ((b - a) > cfg.tolerance && evals < cfg.max_evaluations) {
    if (!std::isfinite(f1) || !std::isfinite(f2)) {
      return nan;
    }
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = error_evaluator(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = error_evaluator(x2);
    }
    ++evals;
    f_min = std::min(f_min, std::min(f1, f2));
    f_max = std::max(f_max, std::max(f1, f2));
    flat = flat && (f_max == f_min);
  }
  if (!std::isfinite(f1) || !std::isfinite(f2)) {
    return nan;
  }
  if (flat) {
    return mid0;  // any point is optimal
  }
  return 0.5 * (a + b);
}

WaveField ledger_unwind(const WaveField& psi, const GaugeLedger& ledger) {
  WaveField out = psi;
  kernels::scale_inplace(std::polar(1.0, ledger.accumulated_phase), out.values);
  return out;
}

double weighted_potential_spread(const WaveField& psi,
                                 const PotentialField& V) {
  double sw = 0.0, swv = 0.0, swv2 = 0.0;
  for (std::size_t l = 0; l < psi.values.size(); ++l) {
    const double w = std::norm(psi.values[l]);
    sw += w;
    swv += w * V.values[l];
    swv2 += w * V.values[l] * V.values[l];
  }
  if (sw <= 0.0) {
    return 0.0;
  }
  const double mean = swv / sw;
  return std::sqrt(std::max(0.0, swv2 / sw - mean * mean));
}

}  // namespace schro
