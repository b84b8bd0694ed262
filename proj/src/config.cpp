#include "zeno/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace zeno::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_decimal(std::string_view text) {
  double value = 0;
  const auto* end = text.data() + text.size();
  if (text.empty()) throw ConfigError("empty number");
  const auto* begin = text.data();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value))
    throw ConfigError("malformed number '" + std::string(text) + "'");
  return value;
}

std::size_t parse_count(std::string_view text) {
  std::size_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end)
    throw ConfigError("malformed count '" + std::string(text) + "'");
  return value;
}

SpacingMode parse_mode(std::string_view text) {
  if (text == "fixed-total" || text == "fixed-total-time") return SpacingMode::fixed_total_time;
  if (text == "fixed-interval") return SpacingMode::fixed_interval;
  throw ConfigError("mode must be fixed-total or fixed-interval, got '" + std::string(text) + "'");
}

}  // namespace

ConfigError::ConfigError(const std::string& source, std::size_t line, const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + message) {}

double parse_real(std::string_view text) {
  text = trim(text);
  const auto pi_pos = text.find("pi");
  if (pi_pos == std::string_view::npos) return parse_decimal(text);

  std::string_view factor = trim(text.substr(0, pi_pos));
  std::string_view divisor = trim(text.substr(pi_pos + 2));
  if (!factor.empty() && factor.back() == '*') factor = trim(factor.substr(0, factor.size() - 1));

  double value = std::numbers::pi;
  if (factor == "-")
    value = -value;
  else if (!factor.empty() && factor != "+")
    value *= parse_decimal(factor);

  if (!divisor.empty()) {
    if (divisor.front() != '/') throw ConfigError("malformed number '" + std::string(text) + "'");
    const double d = parse_decimal(trim(divisor.substr(1)));
    if (d == 0) throw ConfigError("division by zero in '" + std::string(text) + "'");
    value /= d;
  }
  return value;
}

std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> values;
  if (trim(text).empty()) return values;
  for (const auto item : split(text, ',')) values.push_back(parse_real(item));
  return values;
}

std::vector<std::size_t> parse_count_list(std::string_view text) {
  std::vector<std::size_t> values;
  if (trim(text).empty()) return values;
  for (const auto item : split(text, ',')) {
    const auto dots = item.find("..");
    if (dots == std::string_view::npos) {
      values.push_back(parse_count(item));
      continue;
    }
    const auto lo = parse_count(trim(item.substr(0, dots)));
    const auto hi = parse_count(trim(item.substr(dots + 2)));
    if (hi < lo) throw ConfigError("empty range '" + std::string(item) + "'");
    for (auto n = lo; n <= hi; ++n) values.push_back(n);
  }
  return values;
}

void apply_setting(ScenarioConfig& c, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "scenario") {
    if (value.empty()) throw ConfigError("scenario name is empty");
    c.scenario = std::string(value);
  } else if (key == "G") {
    c.params.coupling = parse_real(value);
    if (!(c.params.coupling > 0)) throw ConfigError("G must be positive");
  } else if (key == "eps_a") {
    c.params.energy_a = parse_real(value);
  } else if (key == "eps_b") {
    c.params.energy_b = parse_real(value);
  } else if (key == "g_list") {
    c.g_values = parse_real_list(value);
  } else if (key == "N_list") {
    c.n_values = parse_count_list(value);
  } else if (key == "T") {
    c.total_time = parse_real(value);
    if (*c.total_time < 0) throw ConfigError("T must be non-negative");
  } else if (key == "tau") {
    c.interval = parse_real(value);
    if (!(*c.interval > 0)) throw ConfigError("tau must be positive");
  } else if (key == "mode") {
    c.mode = parse_mode(value);
  } else if (key == "t_kicks") {
    c.kick_times = parse_real_list(value);
  } else if (key == "resolution") {
    c.resolution = parse_count(value);
    if (c.resolution == 0) throw ConfigError("resolution must be positive");
  } else if (key == "trials") {
    c.trials = parse_count(value);
  } else if (key == "seed") {
    std::uint64_t seed = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), seed);
    if (value.empty() || ec != std::errc{} || ptr != value.data() + value.size())
      throw ConfigError("malformed seed '" + std::string(value) + "'");
    c.seed = seed;
  } else if (key == "out") {
    c.out = std::string(value);
  } else {
    throw ConfigError("unknown key '" + std::string(key) + "'");
  }
}

ScenarioConfig parse_config(std::istream& in, const std::string& source) {
  ScenarioConfig config;
  std::set<std::string, std::less<>> seen;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(source, line_no, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(source, line_no, "missing key");
    if (!seen.insert(std::string(key)).second)
      throw ConfigError(source, line_no, "duplicate key '" + std::string(key) + "'");
    try {
      apply_setting(config, key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(source, line_no, e.what());
    }
  }
  return config;
}

ScenarioConfig parse_config_text(std::string_view text, const std::string& source) {
  std::istringstream in{std::string(text)};
  return parse_config(in, source);
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

namespace {

struct Preset {
  std::string command;
  std::string text;
};

const std::map<std::string, Preset>& presets() {
  // Figures 2 and 4 do not state the total time; T = pi/2 with G = 1 is used.
  static const std::map<std::string, Preset> table{
      {"fig1",
       {"run",
        "scenario   = fig1\n"
        "G          = 1\n"
        "eps_a      = 0\n"
        "eps_b      = 0\n"
        "t_kicks    = 0.5\n"
        "g_list     = 0, pi/4, pi/2, 3pi/4, pi\n"
        "T          = 1\n"
        "resolution = 1000\n"
        "out        = fig1.csv\n"}},
      {"fig2",
       {"sweep",
        "scenario = fig2\n"
        "G        = 1\n"
        "mode     = fixed-total\n"
        "T        = pi/2\n"
        "g_list   = pi/2, pi\n"
        "N_list   = 1..60\n"
        "out      = fig2.csv\n"}},
      {"fig4",
       {"sweep",
        "scenario = fig4\n"
        "G        = 1\n"
        "mode     = fixed-total\n"
        "T        = pi/2\n"
        "g_list   = pi/4, pi/2, 3pi/4\n"
        "N_list   = 1..60\n"
        "out      = fig4.csv\n"}},
      {"rates",
       {"rates",
        "scenario = rates\n"
        "G        = 1\n"
        "T        = pi\n"
        "t_kicks  = 0.5\n"
        "g_list   = 3pi/4\n"
        "N_list   = 0..8\n"
        "out      = rates.csv\n"}},
      {"oracle-check",
       {"oracle-check",
        "scenario   = oracle-check\n"
        "G          = 1\n"
        "T          = 2\n"
        "N_list     = 8\n"
        "trials     = 200\n"
        "seed       = 42\n"
        "resolution = 200\n"}},
  };
  return table;
}

const Preset& find_preset(const std::string& name) {
  const auto& table = presets();
  const auto it = table.find(name);
  if (it == table.end()) throw ConfigError("unknown preset '" + name + "'");
  return it->second;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, preset] : presets()) out.push_back(name);
    return out;
  }();
  return names;
}

std::string preset_text(const std::string& name) { return find_preset(name).text; }

std::string preset_command(const std::string& name) { return find_preset(name).command; }

ScenarioConfig preset_config(const std::string& name) {
  return parse_config_text(find_preset(name).text, "preset:" + name);
}

}  // namespace zeno::cli
