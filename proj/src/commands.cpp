#include "zeno/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "zeno/analytics.hpp"
#include "zeno/oracle.hpp"

namespace zeno::cli {

namespace {

constexpr int kDigits = 17;

std::ostringstream csv_stream() {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(kDigits);
  return os;
}

std::string format_number(double x) {
  auto os = csv_stream();
  os << x;
  return os.str();
}

double require_total_time(const ScenarioConfig& c) {
  if (!c.total_time) throw ConfigError("missing required key 'T'");
  return *c.total_time;
}

void check_resonance(const ScenarioConfig& c) {
  if (!c.params.resonant())
    throw UnsupportedRegime("rates need eps_a == eps_b (closed forms hold only at resonance)");
}

void write_gnuplot(const std::string& script_path, const std::string& body) {
  write_file_atomically(script_path, "set datafile separator ','\nset key autotitle columnhead\n" + body);
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory<double>& trajectory) {
  auto buf = csv_stream();
  buf << "t,p10,p01,pvac,norm\n";
  for (const auto& s : trajectory.samples)
    buf << s.t << ',' << s.p10 << ',' << s.p01 << ',' << s.pvac << ',' << s.norm << '\n';
  os << buf.str();
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow<double>>& rows) {
  auto buf = csv_stream();
  buf << "g,N,p10,p01,pvac\n";
  for (const auto& r : rows) buf << r.g << ',' << r.n << ',' << r.p10 << ',' << r.p01 << ',' << r.pvac << '\n';
  os << buf.str();
}

void write_rates_csv(std::ostream& os, const std::vector<RateRow>& rows) {
  auto buf = csv_stream();
  buf << "kind,x,analytic,numeric,abs_error\n";
  for (const auto& r : rows)
    buf << r.kind << ',' << r.x << ',' << r.analytic << ',' << r.numeric << ',' << r.abs_error << '\n';
  os << buf.str();
}

void write_file_atomically(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot write '" + path + "'");
    out << contents;
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw OutputError("write to '" + path + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw OutputError("cannot move output into place at '" + path + "'");
  }
}

std::string indexed_path(const std::string& path, std::size_t index) {
  const std::filesystem::path p(path);
  auto name = p.stem().string() + "_g" + std::to_string(index) + p.extension().string();
  return (p.parent_path() / name).string();
}

std::vector<Trajectory<double>> run_trajectories(const ScenarioConfig& config) {
  const double total = require_total_time(config);
  if (!config.kick_times.empty() && config.g_values.empty())
    throw ConfigError("t_kicks given without g_list");

  std::vector<double> strengths = config.g_values;
  if (strengths.empty()) strengths.push_back(0.0);

  std::vector<Trajectory<double>> out;
  for (const double g : strengths) {
    KickSchedule<double> schedule;
    schedule.total_time = total;
    schedule.resolution = config.resolution;
    for (const double t : config.kick_times) schedule.kicks.push_back({t, g});
    try {
      schedule.validate();
      config.params.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    out.push_back(engine_run(schedule, config.params));
  }
  return out;
}

SweepSpec<double> sweep_spec(const ScenarioConfig& config) {
  SweepSpec<double> spec;
  spec.mode = config.mode.value_or(SpacingMode::fixed_total_time);
  spec.g_values = config.g_values;
  spec.n_values = config.n_values;
  spec.params = config.params;
  if (spec.mode == SpacingMode::fixed_total_time) {
    spec.time = require_total_time(config);
  } else {
    if (!config.interval) throw ConfigError("fixed-interval mode needs key 'tau'");
    spec.time = *config.interval;
  }
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return spec;
}

std::vector<RateRow> rate_table(const ScenarioConfig& config) {
  check_resonance(config);
  config.params.validate();
  const auto& params = config.params;
  const double span = config.total_time.value_or(std::numbers::pi);
  const double t_m = config.kick_times.empty() ? 0.5 : config.kick_times.front();
  const double g_n = config.g_values.empty() ? 3 * std::numbers::pi / 4 : config.g_values.front();
  std::vector<std::size_t> n_values = config.n_values;
  if (n_values.empty())
    for (std::size_t n = 0; n <= 8; ++n) n_values.push_back(n);
  if (!(span > 0)) throw ConfigError("rates need T > 0");
  if (!(t_m >= 0)) throw ConfigError("rates need a non-negative kick time");

  std::vector<RateRow> rows;
  auto add = [&](std::string kind, double x, double analytic, double numeric, double tol) {
    rows.push_back({std::move(kind), x, analytic, numeric, std::abs(analytic - numeric), tol});
  };

  // Free evolution on interior points of (0, T), central differences.
  const KickSchedule<double> no_kicks{{}, 0.0, 1};
  constexpr int kFreePoints = 50;
  for (int i = 0; i < kFreePoints; ++i) {
    const double t = span * (i + 1) / (kFreePoints + 1);
    add("free", t, rate_free(t, params),
        finite_difference_rate(no_kicks, params, t, DifferenceSide::central, kCentralStep), kCentralTolerance);
  }

  // One kick at t_m over a 17-point grid g = k pi / 16 on [0, pi].
  constexpr int kGridPoints = 17;
  for (int k = 0; k < kGridPoints; ++k) {
    const double g = k * std::numbers::pi / (kGridPoints - 1);
    const KickSchedule<double> schedule{{{t_m, g}}, t_m, 1};
    add("one_kick", g, rate_after_one_kick(t_m, g, params),
        finite_difference_rate(schedule, params, t_m, DifferenceSide::right, kOneSidedStep), kOneSidedTolerance);
  }

  // N back-to-back kicks after free evolution t_m.
  for (const auto n : n_values) {
    auto after_kicks = free_propagate(ReducedState<double>::initial(), t_m, params);
    for (std::size_t k = 0; k < n; ++k) after_kicks = apply_kick(after_kicks, g_n);
    auto p10 = [&](double t) { return free_propagate(after_kicks, t - t_m, params).p10(); };
    add("n_kicks", static_cast<double>(n), rate_after_n_kicks(t_m, g_n, n, params),
        finite_difference_rate(p10, t_m, DifferenceSide::right, kOneSidedStep), kOneSidedTolerance);
  }

  // g = pi echo: rate at t_m + t for t in [0, 2 t_m].
  if (t_m > 0) {
    const KickSchedule<double> schedule{{{t_m, std::numbers::pi}}, t_m, 1};
    for (int j = 0; j <= 10; ++j) {
      const double t = j * t_m / 5;
      add("super_zeno", t, rate_super_zeno(t_m, t, params),
          finite_difference_rate(schedule, params, t_m + t, DifferenceSide::right, kOneSidedStep),
          kOneSidedTolerance);
    }
  }
  return rows;
}

OracleCheckReport oracle_check(const ScenarioConfig& config, const EngineRunner& engine) {
  std::size_t max_kicks = 8;
  if (!config.n_values.empty()) max_kicks = *std::max_element(config.n_values.begin(), config.n_values.end());
  if (max_kicks > kOracleCheckMaxKicks)
    throw CapacityError("oracle check supports at most " + std::to_string(kOracleCheckMaxKicks) + " kicks, got " +
                        std::to_string(max_kicks));
  const double total = config.total_time.value_or(2.0);
  if (!(total > 0)) throw ConfigError("oracle check needs T > 0");
  config.params.validate();

  const EngineRunner run_engine =
      engine ? engine : [](const KickSchedule<double>& s, const SystemParams<double>& p) { return engine_run(s, p); };

  std::mt19937_64 rng(config.seed);
  std::uniform_int_distribution<std::size_t> count(0, max_kicks);
  std::uniform_real_distribution<double> when(0.0, total);
  std::uniform_real_distribution<double> strength(0.0, 2 * std::numbers::pi);

  double worst = 0;
  for (std::size_t trial = 0; trial < config.trials; ++trial) {
    KickSchedule<double> schedule;
    schedule.total_time = total;
    schedule.resolution = config.resolution;
    const std::size_t n = count(rng);
    std::vector<double> times;
    do {
      times.clear();
      for (std::size_t k = 0; k < n; ++k) times.push_back(when(rng));
      std::sort(times.begin(), times.end());
    } while (std::adjacent_find(times.begin(), times.end()) != times.end());
    for (const double t : times) schedule.kicks.push_back({t, strength(rng)});

    const auto reference = oracle_run(schedule, config.params);
    const auto candidate = run_engine(schedule, config.params);
    if (reference.samples.size() != candidate.samples.size()) {
      worst = std::numeric_limits<double>::infinity();
      continue;
    }
    for (std::size_t i = 0; i < reference.samples.size(); ++i)
      worst = std::max(worst, std::abs(reference.samples[i].p10 - candidate.samples[i].p10));
  }
  return {worst <= kOracleCheckTolerance, worst, config.trials};
}

std::string format_report(const OracleCheckReport& report) {
  std::ostringstream os;
  os << "status=" << (report.pass ? "PASS" : "FAIL") << " max_dev=" << std::setprecision(3)
     << std::scientific << report.max_deviation << " trials=" << report.trials;
  return os.str();
}

int cmd_run(const ScenarioConfig& config, std::ostream& log, bool gnuplot) {
  const auto trajectories = run_trajectories(config);
  const std::string out = config.out.empty() ? config.scenario + ".csv" : config.out;

  std::vector<std::string> paths;
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    const auto path = trajectories.size() == 1 ? out : indexed_path(out, i);
    std::ostringstream csv;
    write_trajectory_csv(csv, trajectories[i]);
    write_file_atomically(path, csv.str());
    paths.push_back(path);
    log << "wrote " << path << " (" << trajectories[i].samples.size() << " samples";
    if (!config.g_values.empty()) log << ", g=" << format_number(config.g_values[i]);
    log << ")\n";
  }

  if (gnuplot) {
    std::string body = "set xlabel 't'\nset ylabel 'P10'\nplot ";
    for (std::size_t i = 0; i < paths.size(); ++i) {
      body += (i ? ", \\\n     '" : "'") + std::filesystem::path(paths[i]).filename().string() +
              "' using 1:2 with lines title '" +
              (config.g_values.empty() ? std::string("free") : "g=" + format_number(config.g_values[i])) + "'";
    }
    write_gnuplot(out + ".gp", body + "\n");
    log << "wrote " << out << ".gp\n";
  }
  return kExitOk;
}

int cmd_sweep(const ScenarioConfig& config, std::ostream& log, bool gnuplot) {
  const auto spec = sweep_spec(config);
  const auto rows = sweep(spec);
  const std::string out = config.out.empty() ? config.scenario + ".csv" : config.out;
  std::ostringstream csv;
  write_sweep_csv(csv, rows);
  write_file_atomically(out, csv.str());
  log << "wrote " << out << " (" << rows.size() << " rows)\n";

  if (gnuplot) {
    std::string body = "set xlabel 'N'\nset ylabel 'P10'\nplot ";
    const auto name = std::filesystem::path(out).filename().string();
    for (std::size_t i = 0; i < spec.g_values.size(); ++i) {
      const auto g = format_number(spec.g_values[i]);
      body += (i ? ", \\\n     '" : "'") + name + "' using 2:($1==" + g + "?$3:1/0) with linespoints title 'g=" +
              g + "'";
    }
    write_gnuplot(out + ".gp", body + "\n");
    log << "wrote " << out << ".gp\n";
  }
  return kExitOk;
}

int cmd_rates(const ScenarioConfig& config, std::ostream& log) {
  const auto rows = rate_table(config);
  const std::string out = config.out.empty() ? config.scenario + ".csv" : config.out;
  std::ostringstream csv;
  write_rates_csv(csv, rows);
  write_file_atomically(out, csv.str());

  std::size_t failures = 0;
  for (const auto& r : rows) {
    if (r.abs_error > r.tolerance) {
      ++failures;
      log << "FAIL " << r.kind << " x=" << format_number(r.x) << " abs_error=" << r.abs_error
          << " tolerance=" << r.tolerance << '\n';
    }
  }
  log << "wrote " << out << " (" << rows.size() << " rows, " << failures << " over tolerance)\n";
  return failures == 0 ? kExitOk : kExitVerificationFailed;
}

int cmd_oracle_check(const ScenarioConfig& config, std::ostream& log) {
  if (config.trials == 0) log << "warning: trials=0, nothing to compare\n";
  const auto report = oracle_check(config);
  log << format_report(report) << '\n';
  return report.pass ? kExitOk : kExitVerificationFailed;
}

}  // namespace zeno::cli
