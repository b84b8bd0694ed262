#pragma once

// Scenario configuration: a flat `key = value` text format.
//
//   # comment
//   scenario   = fig4
//   G          = 1
//   g_list     = pi/4, pi/2, 3pi/4
//   N_list     = 1..60
//   T          = pi/2
//
// Real-valued entries accept plain decimals and multiples of pi
// (`pi`, `-pi/2`, `3pi/4`, `0.5*pi`). N_list items are counts or inclusive
// ranges `a..b`. Unknown or repeated keys are errors.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "zeno/core.hpp"
#include "zeno/engine.hpp"

namespace zeno::cli {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, std::size_t line, const std::string& message);
  explicit ConfigError(const std::string& message) : std::runtime_error(message) {}
};

struct ScenarioConfig {
  std::string scenario{"custom"};
  SystemParams<double> params{};
  std::vector<double> g_values{};
  std::vector<std::size_t> n_values{};
  std::optional<double> total_time{};
  std::optional<double> interval{};
  std::optional<SpacingMode> mode{};
  std::vector<double> kick_times{};
  std::size_t resolution{1000};
  std::size_t trials{200};
  std::uint64_t seed{42};
  std::string out{};
};

/// Parses one value of a real-valued key.
double parse_real(std::string_view text);
std::vector<double> parse_real_list(std::string_view text);
std::vector<std::size_t> parse_count_list(std::string_view text);

/// Applies a single `key = value` assignment to `config`.
void apply_setting(ScenarioConfig& config, std::string_view key, std::string_view value);

ScenarioConfig parse_config(std::istream& in, const std::string& source = "<config>");
ScenarioConfig parse_config_text(std::string_view text, const std::string& source = "<config>");
ScenarioConfig load_config(const std::string& path);

/// Built-in scenarios reproducing the published figures and checks.
const std::vector<std::string>& preset_names();
std::string preset_text(const std::string& name);
/// Subcommand a preset is meant for: run, sweep, rates or oracle-check.
std::string preset_command(const std::string& name);
ScenarioConfig preset_config(const std::string& name);

}  // namespace zeno::cli
