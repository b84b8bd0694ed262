#include <exception>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "zeno/cli/commands.hpp"

namespace zeno::cli {

namespace {

struct SourceOptions {
  std::string config_path;
  std::string preset;
  std::vector<std::string> overrides;
  std::string out;
  bool gnuplot = false;
};

void add_source_options(CLI::App* cmd, SourceOptions& opts, bool with_plot) {
  auto* config = cmd->add_option("-c,--config", opts.config_path, "scenario config file (key = value)");
  auto* preset = cmd->add_option("-p,--preset", opts.preset, "built-in scenario");
  config->excludes(preset);
  cmd->add_option("-s,--set", opts.overrides, "override one key, e.g. --set N_list=1..10");
  cmd->add_option("-o,--out", opts.out, "output path");
  if (with_plot) cmd->add_flag("--gnuplot", opts.gnuplot, "also write a gnuplot script next to the CSV");
}

ScenarioConfig resolve(const SourceOptions& opts) {
  ScenarioConfig config;
  if (!opts.preset.empty())
    config = preset_config(opts.preset);
  else if (!opts.config_path.empty())
    config = load_config(opts.config_path);

  for (const auto& item : opts.overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + item + "'");
    std::string key = item.substr(0, eq);
    while (!key.empty() && key.back() == ' ') key.pop_back();
    try {
      apply_setting(config, key, std::string_view(item).substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("--set ") + item + ": " + e.what());
    }
  }
  if (!opts.out.empty()) config.out = opts.out;
  return config;
}

int dispatch(const std::string& command, const ScenarioConfig& config, bool gnuplot, std::ostream& out) {
  if (command == "run") return cmd_run(config, out, gnuplot);
  if (command == "sweep") return cmd_sweep(config, out, gnuplot);
  if (command == "rates") return cmd_rates(config, out);
  if (command == "oracle-check") return cmd_oracle_check(config, out);
  throw ConfigError("no command '" + command + "'");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kicked two-qubit Zeno simulator"};
  app.require_subcommand(1);

  const std::vector<std::string> commands{"run", "sweep", "rates", "oracle-check"};
  const std::vector<std::string> descriptions{
      "simulate one schedule per g and write P(t) trajectories",
      "scan equally spaced kick trains over g and N",
      "compare closed-form transition rates with finite differences",
      "cross-check the reduced engine against the full state-vector oracle"};

  std::vector<SourceOptions> options(commands.size());
  std::vector<CLI::App*> subcommands;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    auto* cmd = app.add_subcommand(commands[i], descriptions[i]);
    add_source_options(cmd, options[i], commands[i] == "run" || commands[i] == "sweep");
    subcommands.push_back(cmd);
  }

  std::string preset_name;
  bool print_only = false;
  SourceOptions preset_opts;
  auto* preset_cmd = app.add_subcommand("preset", "run a built-in scenario with its own command");
  preset_cmd->add_option("name", preset_name, "fig1, fig2, fig4, rates or oracle-check")->required();
  preset_cmd->add_flag("--print", print_only, "print the preset config instead of running it");
  preset_cmd->add_option("-s,--set", preset_opts.overrides, "override one key");
  preset_cmd->add_option("-o,--out", preset_opts.out, "output path");
  preset_cmd->add_flag("--gnuplot", preset_opts.gnuplot, "also write a gnuplot script");

  auto* list_cmd = app.add_subcommand("presets", "list built-in scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (list_cmd->parsed()) {
      for (const auto& name : preset_names()) out << name << '\t' << preset_command(name) << '\n';
      return kExitOk;
    }
    if (preset_cmd->parsed()) {
      const auto command = preset_command(preset_name);
      if (print_only) {
        out << preset_text(preset_name);
        return kExitOk;
      }
      preset_opts.preset = preset_name;
      return dispatch(command, resolve(preset_opts), preset_opts.gnuplot, out);
    }
    for (std::size_t i = 0; i < commands.size(); ++i)
      if (subcommands[i]->parsed()) return dispatch(commands[i], resolve(options[i]), options[i].gnuplot, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UnsupportedRegime& e) {
    err << "unsupported regime: " << e.what() << '\n';
    return kExitUsage;
  } catch (const OutputError& e) {
    err << "output error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace zeno::cli
