#pragma once

#include <istream>
#include <string>
#include <vector>

#include "twrn/fading.hpp"
#include "twrn/modes.hpp"
#include "twrn/solvers.hpp"

namespace twrn {

/// Experiment description read from a flat `key = value` file.
///
///   mean_gain_1r = 1          # likewise mean_gain_2r, mean_gain_r1, mean_gain_r2
///   n_samples = 20000
///   seed = 7
///   distribution = rayleigh   # or static
///   eps_inner = 1e-6          # eps_outer, max_iter, bracket_max, threads
///   strategies = PNC_SUP, DNC_SUP, POPT
///   lambda = 0.2, 0.4, 0.6    # symmetric points, and/or
///   pairs = 0.2 1.0, 0.4 1.0  # (lambda1 lambda2) points
///   output_path = fig.csv
///
/// Symmetric points come first, then pairs, each in file order.
struct RunConfig {
  FadingSpec fading{1.0, 1.0, 1.0, 1.0, 20000, 1, Distribution::RayleighPowerGain};
  SolverConfig solver;
  std::vector<std::string> strategies;  ///< canonical names: "PNC_SUP", ..., "POPT"
  std::vector<RateRequirement> sweep;
  std::string output_path;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Canonical strategy column name ("POPT" included) or throws ConfigError.
std::string canonical_strategy_name(const std::string& text);

/// Parses and validates. Errors carry the key and the 1-based line number.
RunConfig parse_run_config(std::istream& in);
RunConfig load_run_config(const std::string& path);

}  // namespace twrn
