#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "twrn/config.hpp"
#include "twrn/oracle.hpp"
#include "twrn/solvers.hpp"

namespace twrn {

struct SweepRow {
  std::string strategy;
  RateRequirement req;
  bool converged = false;
  StrategySolution solution;  ///< meaningful only when converged
  std::string error;          ///< failure message otherwise
};

struct SweepResult {
  std::vector<SweepRow> rows;  ///< strategy-major, sweep order within a strategy
  bool all_converged = true;
};

/// Solves every (strategy, rate point) on one shared sample set. POPT rows
/// reuse the PNC_SUP and DNC_SUP solutions of the same point.
SweepResult run_sweep(const RunConfig& config);

/// Same, on a caller-provided sample set (config.fading is ignored).
SweepResult run_sweep(const RunConfig& config, const SampleSet& samples);

inline constexpr const char* kCsvHeader =
    "strategy,lambda1,lambda2,total_energy,f1,f2,f3,f5,f6,gamma,iterations,converged";

void write_row(std::ostream& out, const SweepRow& row);
void write_csv(std::ostream& out, const SweepResult& result);

struct VerifyOptions {
  std::uint64_t master_seed = 1;
  std::int64_t lemma3_trials = 100000;
  std::int64_t lemma4_trials = 100000;
  std::int64_t oracle_trials = 1000;
  int grid_points = 200;
  double oracle_tolerance = 1e-3;
  double static_tolerance = 0.01;
  /// Allocator under test; swap in a broken one to check the checks.
  std::function<ModeAllocation(AllocatorId, const OracleInput&)> allocator = closed_form;

  /// Throws ConfigError when a trial count is below 1.
  void validate() const;
};

struct CheckResult {
  std::string name;
  std::int64_t trials = 0;
  std::int64_t failures = 0;
  double worst = 0.0;  ///< largest violation-side slack seen (positive means failed)
  std::string detail;
  bool passed() const { return failures == 0; }
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
};

/// One entry of the fixed static-channel agreement matrix.
struct StaticCase {
  Strategy strategy;
  RateRequirement req;
  ChannelSample gains;
};

const std::vector<StaticCase>& static_test_matrix();

CheckResult verify_lemma3(std::uint64_t seed, std::int64_t trials);
CheckResult verify_lemma4(std::uint64_t seed, std::int64_t trials);
CheckResult verify_allocator(AllocatorId id, const VerifyOptions& options);
CheckResult verify_static_matrix(const VerifyOptions& options);

VerifyReport run_verify(const VerifyOptions& options);
void write_report(std::ostream& out, const VerifyReport& report);

}  // namespace twrn
