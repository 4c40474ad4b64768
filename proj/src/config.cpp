#include "twrn/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "twrn/errors.hpp"

namespace twrn {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) parts.push_back(trim(item));
  return parts;
}

double parse_real(const std::string& key, const std::string& text, int line) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty())
    throw ConfigError(key, "expected a number, got '" + text + "'", line);
  return v;
}

template <class Int>
Int parse_integer(const std::string& key, const std::string& text, int line) {
  Int v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty())
    throw ConfigError(key, "expected a non-negative integer, got '" + text + "'", line);
  return v;
}

}  // namespace

std::string canonical_strategy_name(const std::string& text) {
  std::string upper = trim(text);
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  std::replace(upper.begin(), upper.end(), '-', '_');
  if (upper == "POPT") return upper;
  if (parse_strategy(upper)) return upper;
  throw ConfigError("strategies", "unknown strategy '" + trim(text) + "'");
}

void RunConfig::validate() const {
  fading.validate();
  solver.validate();
  if (strategies.empty()) throw ConfigError("strategies", "at least one strategy is required");
  if (sweep.empty()) throw ConfigError("lambda", "the sweep has no rate points");
  for (const auto& r : sweep) r.validate();
}

RunConfig parse_run_config(std::istream& in) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::vector<RateRequirement> symmetric, pairs;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw.substr(0, raw.find('#')));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError(text, "expected 'key = value'", line);
    const std::string key = trim(std::string_view(text).substr(0, eq));
    const std::string value = trim(std::string_view(text).substr(eq + 1));
    if (key.empty()) throw ConfigError("(empty)", "missing key", line);
    if (!seen.insert(key).second) throw ConfigError(key, "duplicate key", line);
    if (value.empty()) throw ConfigError(key, "missing value", line);

    if (key == "mean_gain_1r") cfg.fading.mean_gain_1r = parse_real(key, value, line);
    else if (key == "mean_gain_2r") cfg.fading.mean_gain_2r = parse_real(key, value, line);
    else if (key == "mean_gain_r1") cfg.fading.mean_gain_r1 = parse_real(key, value, line);
    else if (key == "mean_gain_r2") cfg.fading.mean_gain_r2 = parse_real(key, value, line);
    else if (key == "n_samples") cfg.fading.n_samples = parse_integer<std::size_t>(key, value, line);
    else if (key == "seed") cfg.fading.seed = parse_integer<std::uint64_t>(key, value, line);
    else if (key == "distribution") {
      try {
        cfg.fading.distribution = parse_distribution(value);
      } catch (const ConfigError& e) {
        throw ConfigError(key, "unknown distribution '" + value + "'", line);
      }
    }
    else if (key == "eps_inner") cfg.solver.eps_inner = parse_real(key, value, line);
    else if (key == "eps_outer") cfg.solver.eps_outer = parse_real(key, value, line);
    else if (key == "max_iter") cfg.solver.max_iter = parse_integer<int>(key, value, line);
    else if (key == "bracket_max") cfg.solver.bracket_max = parse_real(key, value, line);
    else if (key == "threads") cfg.solver.threads = parse_integer<unsigned>(key, value, line);
    else if (key == "strategies") {
      for (const auto& item : split(value, ',')) {
        try {
          cfg.strategies.push_back(canonical_strategy_name(item));
        } catch (const ConfigError& e) {
          throw ConfigError(key, "unknown strategy '" + item + "'", line);
        }
      }
    } else if (key == "lambda") {
      for (const auto& item : split(value, ',')) {
        const double l = parse_real(key, item, line);
        symmetric.push_back({l, l});
      }
    } else if (key == "pairs") {
      for (const auto& item : split(value, ',')) {
        std::istringstream pair(item);
        std::string a, b, extra;
        if (!(pair >> a >> b) || (pair >> extra))
          throw ConfigError(key, "expected 'lambda1 lambda2', got '" + item + "'", line);
        pairs.push_back({parse_real(key, a, line), parse_real(key, b, line)});
      }
    } else if (key == "output_path") {
      cfg.output_path = value;
    } else {
      throw ConfigError(key, "unknown key", line);
    }
  }
  cfg.sweep = symmetric;
  cfg.sweep.insert(cfg.sweep.end(), pairs.begin(), pairs.end());
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  return parse_run_config(in);
}

}  // namespace twrn
