#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "zeno/cli/config.hpp"
#include "zeno/core.hpp"
#include "zeno/engine.hpp"

namespace zeno::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitUsage = 2,
};

inline constexpr std::size_t kOracleCheckMaxKicks = 10;
inline constexpr double kOracleCheckTolerance = 1e-10;

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// CSV writers; numbers are printed with 17 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory<double>& trajectory);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow<double>>& rows);

/// Writes `contents` to `path` through a temporary sibling and a rename, so a
/// failed write never leaves a partial file behind.
void write_file_atomically(const std::string& path, const std::string& contents);

/// `fig1.csv` -> `fig1_g2.csv`.
std::string indexed_path(const std::string& path, std::size_t index);

/// Trajectories for each g in the config (each applied to every kick time),
/// or a single kick-free trajectory when no kicks are configured.
std::vector<Trajectory<double>> run_trajectories(const ScenarioConfig& config);
SweepSpec<double> sweep_spec(const ScenarioConfig& config);

struct RateRow {
  std::string kind;  // free, one_kick, n_kicks, super_zeno
  double x;          // t, g, N or t respectively
  double analytic;
  double numeric;
  double abs_error;
  double tolerance;
};

std::vector<RateRow> rate_table(const ScenarioConfig& config);
void write_rates_csv(std::ostream& os, const std::vector<RateRow>& rows);

using EngineRunner = std::function<Trajectory<double>(const KickSchedule<double>&, const SystemParams<double>&)>;

struct OracleCheckReport {
  bool pass;
  double max_deviation;
  std::size_t trials;
};

/// Paired oracle/engine runs over `config.trials` random schedules: up to
/// max(N_list) kicks (default 8) with times uniform in [0, T] and g uniform
/// in [0, 2 pi]. `engine` defaults to engine_run and is replaceable so the
/// check itself can be mutation-tested.
OracleCheckReport oracle_check(const ScenarioConfig& config, const EngineRunner& engine = {});
std::string format_report(const OracleCheckReport& report);

// Subcommands. Each returns an ExitCode; progress and errors go to `log`.
int cmd_run(const ScenarioConfig& config, std::ostream& log, bool gnuplot = false);
int cmd_sweep(const ScenarioConfig& config, std::ostream& log, bool gnuplot = false);
int cmd_rates(const ScenarioConfig& config, std::ostream& log);
int cmd_oracle_check(const ScenarioConfig& config, std::ostream& log);

/// Full command-line entry point.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace zeno::cli
