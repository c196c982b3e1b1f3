#include "schro/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "schro/errors.hpp"

namespace schro {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) {
    return "";
  }
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(value, &pos);
    if (pos != value.size()) {
      throw std::invalid_argument(value);
    }
    return d;
  } catch (const std::exception&) {
    throw ConfigError("invalid numeric value for '" + key + "': " + value);
  }
}

int parse_int(const std::string& key, const std::string& value) {
  const double d = parse_double(key, value);
  if (d != std::floor(d)) {
    throw ConfigError("expected an integer for '" + key + "': " + value);
  }
  return static_cast<int>(d);
}

void set_key(SimulationConfig& c, const std::string& key,
             const std::string& value) {
  if (key == "equation") {
    if (value == "nls") {
      c.equation = EquationKind::Nls;
    } else if (value == "sn") {
      c.equation = EquationKind::Sn;
    } else {
      throw ConfigError("equation must be 'nls' or 'sn', got: " + value);
    }
  } else if (key == "g") {
    c.g = parse_double(key, value);
  } else if (key == "dim") {
    c.dim = parse_int(key, value);
  } else if (key == "points_per_axis") {
    c.points_per_axis = parse_int(key, value);
  } else if (key == "box_length") {
    c.box_length = parse_double(key, value);
  } else if (key == "t_final") {
    c.t_final = parse_double(key, value);
  } else if (key == "tol") {
    c.tol = parse_double(key, value);
  } else if (key == "tableau") {
    c.tableau = value;
  } else if (key == "gauge") {
    c.gauge = parse_gauge(value);
  } else if (key == "initial_condition") {
    c.initial_condition = value;
  } else if (key == "h0") {
    c.h0 = parse_double(key, value);
  } else if (key == "accept_threshold") {
    c.accept_threshold = parse_double(key, value);
  } else if (key == "record_every") {
    c.record_every = parse_int(key, value);
  } else if (key == "blowup_threshold") {
    c.blowup_threshold = parse_double(key, value);
  } else if (key == "seed") {
    c.seed = static_cast<unsigned>(parse_int(key, value));
  } else if (key == "out_dir") {
    c.out_dir = value;
  } else {
    throw ConfigError("unknown config key: " + key);
  }
}

ButcherTableau tableau_for(const SimulationConfig& c) {
  if (c.tableau == "heun") {
    return heun_tableau();
  }
  if (c.tableau == "dp54") {
    return dp54_tableau();
  }
  throw ConfigError("tableau must be 'heun' or 'dp54', got: " + c.tableau);
}

void write_steps_csv(const std::string& path,
                     const std::vector<StepRecord>& records) {
  std::ofstream out(path);
  out << "t,h,C,delta,accepted\n";
  char line[256];
  for (const StepRecord& r : records) {
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,%d\n", r.t, r.h,
                  r.c, r.delta, r.accepted ? 1 : 0);
    out << line;
  }
}

void write_summary_json(const std::string& path, const RunSummary& s) {
  nlohmann::json j = {
      {"n_loops", s.n_loops},
      {"n_accepted", s.n_accepted},
      {"n_rejected", s.n_rejected},
      {"wall_seconds", s.wall_seconds},
      {"final_mass", s.final_mass},
      {"final_energy", s.final_energy},
      {"ledger_phase", s.ledger_phase},
      {"stop_reason", to_string(s.stop_reason)},
  };
  std::ofstream out(path);
  out << j.dump(2) << "\n";
}

void check_same_physics(const SimulationConfig& a, const SimulationConfig& b) {
  const bool same =
      a.equation == b.equation && a.g == b.g && a.dim == b.dim &&
      a.points_per_axis == b.points_per_axis &&
      a.box_length == b.box_length && a.t_final == b.t_final &&
      a.tol == b.tol && a.tableau == b.tableau &&
      a.initial_condition == b.initial_condition && a.h0 == b.h0 &&
      a.accept_threshold == b.accept_threshold;
  if (!same) {
    throw ConfigError(
        "benchmark configs must differ only in the gauge strategy");
  }
}

}  // namespace

SimulationConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  SimulationConfig config;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": expected 'key = value'");
    }
    set_key(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return config;
}

void apply_override(SimulationConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("override must be key=value, got: " + assignment);
  }
  set_key(config, trim(assignment.substr(0, eq)),
          trim(assignment.substr(eq + 1)));
}

GaugeStrategy parse_gauge(const std::string& text) {
  if (text == "zero") {
    return GaugeStrategy::zero();
  }
  if (text == "near_optimal") {
    return GaugeStrategy::near_optimal();
  }
  if (text == "heun_optimal") {
    return GaugeStrategy::heun_optimal();
  }
  if (text == "numeric_optimal") {
    return GaugeStrategy::numeric_optimal();
  }
  if (text.rfind("constant:", 0) == 0) {
    return GaugeStrategy::fixed(parse_double("gauge", text.substr(9)));
  }
  throw ConfigError(
      "gauge must be zero|near_optimal|heun_optimal|numeric_optimal|"
      "constant:<C>, got: " +
      text);
}

std::string gauge_name(const GaugeStrategy& strategy) {
  using Kind = GaugeStrategy::Kind;
  switch (strategy.kind) {
    case Kind::Zero:
      return "zero";
    case Kind::NearOptimal:
      return "near_optimal";
    case Kind::HeunOptimal:
      return "heun_optimal";
    case Kind::NumericOptimal:
      return "numeric_optimal";
    case Kind::Constant: {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "constant:%g", strategy.constant);
      return buf;
    }
  }
  return "?";
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::Completed:
      return "completed";
    case StopReason::Blowup:
      return "blowup";
    case StopReason::StepUnderflow:
      return "step_underflow";
  }
  return "?";
}

void validate(const SimulationConfig& c) {
  if (!(c.t_final > 0.0)) {
    throw ConfigError("t_final must be positive");
  }
  if (!(c.tol > 0.0) || !(c.tol < 1.0)) {
    throw ConfigError("tol must lie in (0, 1)");
  }
  if (c.record_every < 1) {
    throw ConfigError("record_every must be >= 1");
  }
  if (!(c.blowup_threshold > 0.0)) {
    throw ConfigError("blowup_threshold must be positive");
  }
  tableau_for(c);
  if (c.initial_condition != "soliton" && c.initial_condition != "gaussian" &&
      c.initial_condition != "gaussian_normalized") {
    throw ConfigError("unknown initial_condition: " + c.initial_condition);
  }
  if (c.initial_condition == "soliton" &&
      (c.equation != EquationKind::Nls || c.dim != 1)) {
    throw ConfigError("the soliton initial condition requires NLS in 1D");
  }
  if (c.gauge.kind == GaugeStrategy::Kind::HeunOptimal &&
      c.tableau != "heun") {
    throw ConfigError("gauge heun_optimal requires tableau heun");
  }
  make_grid(c.dim, c.points_per_axis, c.box_length);  // range checks
}

WaveField build_initial_condition(const SimulationConfig& c) {
  GridPtr grid = make_grid(c.dim, c.points_per_axis, c.box_length);
  WaveField psi = make_field(grid);
  const int n = grid->points_per_axis;

  const auto r2_at = [&](std::size_t l) {
    if (grid->dim == 1) {
      const double x = grid->coords[l];
      return x * x;
    }
    const double x = grid->coords[l / n];
    const double y = grid->coords[l % n];
    return x * x + y * y;
  };

  if (c.initial_condition == "soliton") {
    const double s2 = std::sqrt(2.0);
    for (int l = 0; l < n; ++l) {
      psi.values[l] = s2 / std::cosh(s2 * grid->coords[l]);
    }
  } else {
    for (std::size_t l = 0; l < grid->size; ++l) {
      psi.values[l] = std::exp(-0.5 * r2_at(l));
    }
    if (c.initial_condition == "gaussian") {
      // Unit analytic L2 mass: prefactor pi^(-d/4).
      kernels::scale_inplace(std::pow(std::numbers::pi, -grid->dim / 4.0),
                             psi.values);
    } else {
      const double m = mass(psi);
      if (m <= 0.0) {
        throw ConfigError("cannot normalize a zero-mass initial condition");
      }
      kernels::scale_inplace(1.0 / std::sqrt(m), psi.values);
    }
  }
  return psi;
}

RunResult run(const SimulationConfig& config, const std::string& label) {
  validate(config);
  const ButcherTableau tableau = tableau_for(config);
  PotentialKind kind{config.equation, config.g};
  WaveField psi0 = build_initial_condition(config);
  PotentialModel model(kind, psi0.grid);

  StepperOptions options;
  options.tol = config.tol;
  options.accept_threshold = config.accept_threshold.value_or(1.0);
  options.control.h_max = config.t_final;
  Stepper stepper(tableau, model, config.gauge, options);

  StepperState state;
  state.psi = std::move(psi0);
  state.t = 0.0;
  state.h = config.h0.value_or(std::pow(config.tol, 1.0 / tableau.order) *
                               config.t_final / 1000.0);
  state.h = std::clamp(state.h, options.control.h_min, config.t_final);

  RunResult result;
  StopReason reason = StopReason::Completed;
  const auto t_start = std::chrono::steady_clock::now();
  long attempt = 0;
  const double t_end = config.t_final * (1.0 - 1e-14);
  while (state.t < t_end) {
    state.h = std::min(state.h, config.t_final - state.t);  // final clip
    StepRecord record;
    try {
      record = stepper.advance(state);
    } catch (const StepUnderflowError&) {
      reason = StopReason::StepUnderflow;
      break;
    }
    ++attempt;
    if (attempt % config.record_every == 0) {
      result.records.push_back(record);
    }
    if (record.accepted && blowup_guard(state.psi, config.blowup_threshold)) {
      reason = StopReason::Blowup;
      break;
    }
  }
  const auto t_stop = std::chrono::steady_clock::now();

  result.final_psi = state.psi;
  result.final_psi_unwound = ledger_unwind(state.psi, state.ledger);

  RunSummary& s = result.summary;
  s.n_accepted = state.n_accepted;
  s.n_rejected = state.n_rejected;
  s.n_loops = state.n_accepted + state.n_rejected;
  s.rhs_evaluations = state.rhs_evaluations;
  s.wall_seconds = std::chrono::duration<double>(t_stop - t_start).count();
  s.final_mass = mass(result.final_psi);
  s.final_energy = PotentialModel(kind, result.final_psi.grid)
                       .energy(result.final_psi_unwound);
  s.ledger_phase = state.ledger.accumulated_phase;
  s.stop_reason = reason;

  if (!config.out_dir.empty()) {
    std::filesystem::create_directories(config.out_dir);
    write_steps_csv(config.out_dir + "/" + label + "steps.csv",
                    result.records);
    write_summary_json(config.out_dir + "/" + label + "summary.json", s);
  }
  return result;
}

std::vector<ScanRow> scan_constant_c(const SimulationConfig& config,
                                     const std::vector<double>& c_values) {
  std::vector<ScanRow> rows;
  for (double c : c_values) {
    SimulationConfig cfg = config;
    cfg.gauge = GaugeStrategy::fixed(c);
    cfg.record_every = 1;
    cfg.out_dir.clear();
    ScanRow row;
    row.c = c;
    try {
      RunResult r = run(cfg);
      if (r.summary.stop_reason == StopReason::Completed &&
          r.summary.n_accepted > 0) {
        double h_sum = 0.0;
        long n = 0;
        for (const StepRecord& rec : r.records) {
          if (rec.accepted) {
            h_sum += rec.h;
            ++n;
          }
        }
        row.h_av = h_sum / static_cast<double>(n);
        row.n_loops = r.summary.n_loops;
        row.ok = true;
      }
    } catch (const std::exception& e) {
      std::fprintf(stderr, "warning: scan run at C=%g failed: %s\n", c,
                   e.what());
    }
    rows.push_back(row);
  }

  if (!config.out_dir.empty()) {
    std::filesystem::create_directories(config.out_dir);
    std::ofstream out(config.out_dir + "/scan.csv");
    out << "C,h_av,n_loops\n";
    char line[160];
    for (const ScanRow& row : rows) {
      if (!row.ok) {
        continue;
      }
      std::snprintf(line, sizeof(line), "%.17g,%.17g,%ld\n", row.c, row.h_av,
                    row.n_loops);
      out << line;
    }
  }
  return rows;
}

std::vector<BenchRow> benchmark(const std::vector<SimulationConfig>& configs) {
  if (configs.size() < 2) {
    throw ConfigError("benchmark needs at least two configs");
  }
  for (std::size_t i = 1; i < configs.size(); ++i) {
    check_same_physics(configs.front(), configs[i]);
  }

  std::vector<BenchRow> rows;
  std::vector<RunResult> results;
  for (const SimulationConfig& cfg : configs) {
    BenchRow row;
    row.strategy = gauge_name(cfg.gauge);
    RunResult r = run(cfg, row.strategy + "_");
    row.summary = r.summary;
    results.push_back(std::move(r));
    rows.push_back(std::move(row));
  }

  const RunResult& base = results.front();
  const double equiv_tol = 50.0 * configs.front().tol;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].speedup = static_cast<double>(base.summary.n_loops) /
                      static_cast<double>(rows[i].summary.n_loops);
    double abs_dev = 0.0;
    double state_dev = 0.0;
    const auto& psi = results[i].final_psi;
    const auto& unwound = results[i].final_psi_unwound;
    for (std::size_t l = 0; l < psi.values.size(); ++l) {
      abs_dev = std::max(abs_dev,
                         std::abs(std::abs(psi.values[l]) -
                                  std::abs(base.final_psi.values[l])));
      state_dev = std::max(state_dev,
                           std::abs(unwound.values[l] -
                                    base.final_psi_unwound.values[l]));
    }
    rows[i].max_abs_dev = abs_dev;
    rows[i].max_state_dev = state_dev;
    rows[i].gauge_equivalent = abs_dev <= equiv_tol && state_dev <= equiv_tol;
  }
  return rows;
}

void print_benchmark_table(const std::vector<BenchRow>& rows) {
  std::printf("%-18s %10s %10s %10s %10s %9s %12s %12s %s\n", "strategy",
              "n_loops", "accepted", "rejected", "wall_s", "speedup",
              "max|d|psi||", "max|d psi|", "equiv");
  for (const BenchRow& r : rows) {
    std::printf("%-18s %10ld %10ld %10ld %10.3f %9.3f %12.3e %12.3e %s\n",
                r.strategy.c_str(), r.summary.n_loops, r.summary.n_accepted,
                r.summary.n_rejected, r.summary.wall_seconds, r.speedup,
                r.max_abs_dev, r.max_state_dev,
                r.gauge_equivalent ? "yes" : "NO");
  }
}

}  // namespace schro
