#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "schro/errors.hpp"
#include "schro/harness.hpp"

namespace {

// exit codes: 0 success, 1 config error, 2 runtime stop (blow-up/underflow)
constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeStop = 2;

schro::SimulationConfig load(const std::string& config_path,
                             const std::vector<std::string>& overrides,
                             const std::string& out_dir) {
  schro::SimulationConfig config;
  if (!config_path.empty()) {
    config = schro::parse_config_file(config_path);
  }
  for (const std::string& kv : overrides) {
    schro::apply_override(config, kv);
  }
  if (!out_dir.empty()) {
    config.out_dir = out_dir;
  }
  return config;
}

int cmd_run(const schro::SimulationConfig& config) {
  schro::RunResult result = schro::run(config);
  const schro::RunSummary& s = result.summary;
  std::printf(
      "stop=%s loops=%ld accepted=%ld rejected=%ld wall=%.3fs mass=%.12g "
      "energy=%.12g phase=%.12g\n",
      schro::to_string(s.stop_reason).c_str(), s.n_loops, s.n_accepted,
      s.n_rejected, s.wall_seconds, s.final_mass, s.final_energy,
      s.ledger_phase);
  return s.stop_reason == schro::StopReason::Completed ? kOk : kRuntimeStop;
}

int cmd_scan(const schro::SimulationConfig& config, double c_min, double c_max,
             int count) {
  if (count < 1) {
    throw schro::ConfigError("scan needs at least one C value");
  }
  std::vector<double> cs;
  for (int i = 0; i < count; ++i) {
    cs.push_back(count == 1 ? 0.5 * (c_min + c_max)
                            : c_min + (c_max - c_min) * i / (count - 1));
  }
  const auto rows = schro::scan_constant_c(config, cs);
  std::printf("%12s %14s %10s\n", "C", "h_av", "n_loops");
  for (const auto& row : rows) {
    if (row.ok) {
      std::printf("%12.5g %14.6e %10ld\n", row.c, row.h_av, row.n_loops);
    } else {
      std::printf("%12.5g %14s %10s\n", row.c, "failed", "-");
    }
  }
  return kOk;
}

int cmd_bench(const schro::SimulationConfig& config,
              const std::string& strategies) {
  std::vector<schro::SimulationConfig> configs;
  std::string rest = strategies;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string name = rest.substr(0, comma);
    rest = comma == std::string::npos ? "" : rest.substr(comma + 1);
    schro::SimulationConfig cfg = config;
    cfg.gauge = schro::parse_gauge(name);
    configs.push_back(cfg);
  }
  const auto rows = schro::benchmark(configs);
  schro::print_benchmark_table(rows);
  for (const auto& row : rows) {
    if (row.summary.stop_reason != schro::StopReason::Completed) {
      return kRuntimeStop;
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral integrating-factor solver for NLS and SN equations"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "config file (key = value lines)");
  app.add_option("--set", overrides, "override, key=value (repeatable)");
  app.add_option("--out", out_dir, "output directory");

  auto* run_cmd = app.add_subcommand("run", "run one simulation");
  auto* validate_cmd =
      app.add_subcommand("validate-config", "check a config and exit");

  auto* scan_cmd =
      app.add_subcommand("scan", "constant-C scan of the average step size");
  double c_min = -2.0, c_max = 4.0;
  int c_count = 13;
  scan_cmd->add_option("--c-min", c_min, "smallest C");
  scan_cmd->add_option("--c-max", c_max, "largest C");
  scan_cmd->add_option("--c-count", c_count, "number of C values");

  auto* bench_cmd =
      app.add_subcommand("bench", "compare gauge strategies on one config");
  std::string strategies = "zero,near_optimal";
  bench_cmd->add_option("--strategies", strategies,
                        "comma-separated gauge strategies");

  // let `schro run --config ...` work as well as `schro --config ... run`
  for (auto* sub : app.get_subcommands({})) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigError;
  }

  try {
    schro::SimulationConfig config = load(config_path, overrides, out_dir);
    if (validate_cmd->parsed()) {
      schro::validate(config);
      std::printf("config ok\n");
      return kOk;
    }
    if (run_cmd->parsed()) {
      return cmd_run(config);
    }
    if (scan_cmd->parsed()) {
      return cmd_scan(config, c_min, c_max, c_count);
    }
    if (bench_cmd->parsed()) {
      return cmd_bench(config, strategies);
    }
  } catch (const schro::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kRuntimeStop;
  }
  return kConfigError;
}
