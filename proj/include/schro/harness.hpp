#pragma once

#include <optional>
#include <string>
#include <vector>

#include "schro/integrator.hpp"

namespace schro {

struct SimulationConfig {
  EquationKind equation = EquationKind::Nls;
  double g = -1.0;
  int dim = 1;
  int points_per_axis = 2048;
  double box_length = 80.0;
  double t_final = 10.0;
  double tol = 1e-7;
  std::string tableau = "dp54";  // heun | dp54
  GaugeStrategy gauge;
  // soliton | gaussian | gaussian_normalized
  std::string initial_condition = "soliton";
  std::optional<double> h0;
  std::optional<double> accept_threshold;
  int record_every = 1;
  double blowup_threshold = 1e8;
  unsigned seed = 0;
  std::string out_dir;
};

// Flat key=value text file; '#' starts a comment; unknown keys are errors.
SimulationConfig parse_config_file(const std::string& path);

// One "key=value" override, same keys as the config file.
void apply_override(SimulationConfig& config, const std::string& assignment);

// Throws ConfigError on invalid combinations (bad ranges, soliton outside
// NLS 1D, unknown tableau or initial condition, ...).
void validate(const SimulationConfig& config);

GaugeStrategy parse_gauge(const std::string& text);
std::string gauge_name(const GaugeStrategy& strategy);

enum class StopReason { Completed, Blowup, StepUnderflow };
std::string to_string(StopReason reason);

struct RunSummary {
  long n_loops = 0;  // attempted steps: accepted + rejected
  long n_accepted = 0;
  long n_rejected = 0;
  long rhs_evaluations = 0;
  double wall_seconds = 0.0;
  double final_mass = 0.0;
  double final_energy = 0.0;
  double ledger_phase = 0.0;
  StopReason stop_reason = StopReason::Completed;
};

struct RunResult {
  RunSummary summary;
  std::vector<StepRecord> records;
  WaveField final_psi;          // gauge as evolved (carries exp(-i phi))
  WaveField final_psi_unwound;  // zero-gauge state after ledger unwind
};

WaveField build_initial_condition(const SimulationConfig& config);

// Drives the stepper to t_final (final step clipped to land exactly), then
// unwinds the ledger. When config.out_dir is set, writes
// <out_dir>/<label>steps.csv and <out_dir>/<label>summary.json.
RunResult run(const SimulationConfig& config, const std::string& label = "");

struct ScanRow {
  double c = 0.0;
  double h_av = 0.0;  // mean accepted step size
  long n_loops = 0;
  bool ok = false;
};

// One full run per C with the Constant(C) strategy. Failed runs leave
// ok=false and the scan continues. Writes <out_dir>/scan.csv when set.
std::vector<ScanRow> scan_constant_c(const SimulationConfig& config,
                                     const std::vector<double>& c_values);

struct BenchRow {
  std::string strategy;
  RunSummary summary;
  double speedup = 0.0;        // baseline n_loops / this n_loops
  double max_abs_dev = 0.0;    // max | |psi| - |psi_baseline| |
  double max_state_dev = 0.0;  // max |unwound - unwound_baseline|
  bool gauge_equivalent = false;
};

// Runs configs that may differ only in gauge strategy; the first row is the
// baseline. Throws ConfigError when physical parameters differ.
std::vector<BenchRow> benchmark(const std::vector<SimulationConfig>& configs);

void print_benchmark_table(const std::vector<BenchRow>& rows);

}  // namespace schro
