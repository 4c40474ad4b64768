#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twrn/alloc.hpp"
#include "twrn/fading.hpp"
#include "twrn/modes.hpp"

namespace twrn {

enum class Strategy { PncZp, PncSup, DncTs, DncSup, CwSup };

inline constexpr std::array<Strategy, 5> kAllStrategies = {
    Strategy::PncZp, Strategy::PncSup, Strategy::DncTs, Strategy::DncSup, Strategy::CwSup};

std::string_view to_string(Strategy s) noexcept;        // "PNC_ZP", ...
std::optional<Strategy> parse_strategy(std::string_view text);  // case-insensitive

/// Required average rates in frames per slot (S1 -> S2 and S2 -> S1).
struct RateRequirement {
  double lambda1 = 0.0;
  double lambda2 = 0.0;

  /// Throws ConfigError: both must be finite and >= 0, not both zero.
  void validate() const;
};

/// One mode of a strategy with the total bits per slot each stream must carry.
struct ModePlan {
  std::string label;  ///< "1", "2", "3", "5" or "6"
  ModeKind kind;
  std::array<double, 2> bits{};
  std::array<std::string, 2> streams;  ///< rate labels, e.g. "R11", "R12"
};

/// Modes of a strategy for a canonical requirement (lambda1 <= lambda2).
std::vector<ModePlan> strategy_plan(Strategy s, double lambda1, double lambda2);

struct StrategySolution {
  Strategy strategy = Strategy::PncSup;
  std::map<std::string, double> fractions;   ///< mode label -> time fraction
  Multipliers multipliers;                   ///< "beta_" + rate label
  std::map<std::string, double> avg_rates;   ///< rate label -> average rate within its mode
  std::map<std::string, double> avg_powers;  ///< mode label -> average power within the mode
  double total_energy = 0.0;
  double gamma = 0.0;
  bool converged = false;
  int iterations = 0;
  bool swapped = false;

  std::map<std::string, double> kkt_residuals;  ///< mode label -> |P - sum beta R - gamma|
  std::map<std::string, double> rate_slack;     ///< rate label -> |f R - bits| / bits

  double fraction(const std::string& mode) const;
  double fraction_sum() const;
};

StrategySolution solve_strategy(Strategy s, const RateRequirement& req, const SampleSet& set,
                                const SolverConfig& cfg);

StrategySolution solve_pnc_zp(const RateRequirement& req, const SampleSet& set, const SolverConfig& cfg);
StrategySolution solve_pnc_sup(const RateRequirement& req, const SampleSet& set, const SolverConfig& cfg);
StrategySolution solve_dnc_ts(const RateRequirement& req, const SampleSet& set, const SolverConfig& cfg);
StrategySolution solve_dnc_sup(const RateRequirement& req, const SampleSet& set, const SolverConfig& cfg);
StrategySolution solve_cw_sup(const RateRequirement& req, const SampleSet& set, const SolverConfig& cfg);

/// Slack used when comparing energies from two solves.
double energy_tolerance(const SolverConfig& cfg, double energy);

struct Selection {
  StrategySolution best;
  StrategySolution pnc_sup;
  StrategySolution dnc_sup;
};

/// Chooses PNC-Sup only when it beats DNC-Sup by more than the comparison
/// slack; DNC-TS and CW-Sup never win against DNC-Sup.
Selection select_optimal(const RateRequirement& req, const SampleSet& set, const SolverConfig& cfg);

/// Same choice from already solved strategies.
const StrategySolution& choose(const StrategySolution& pnc_sup, const StrategySolution& dnc_sup,
                               const SolverConfig& cfg);

}  // namespace twrn
