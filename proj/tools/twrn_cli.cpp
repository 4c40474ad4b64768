// Command-line front end: solve one point, sweep a config, or run the
// oracle suites.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "twrn/config.hpp"
#include "twrn/errors.hpp"
#include "twrn/runner.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
};

twrn::RunConfig base_config(const CommonFlags& flags, bool require_sweep) {
  twrn::RunConfig cfg;
  if (!flags.config_path.empty()) {
    cfg = twrn::load_run_config(flags.config_path);
  } else if (require_sweep) {
    throw twrn::ConfigError("config", "sweep needs --config");
  }
  if (flags.seed) cfg.fading.seed = *flags.seed;
  if (flags.samples) cfg.fading.n_samples = *flags.samples;
  return cfg;
}

// Broken p2p allocator without the [.]+ clamp, for checking the checks.
twrn::ModeAllocation unclamped_p2p(twrn::AllocatorId id, const twrn::OracleInput& in) {
  if (id != twrn::AllocatorId::P2p) return twrn::closed_form(id, in);
  twrn::ModeAllocation a;
  a.power[0] = in.beta[0] * twrn::kLog2e - 1.0 / in.gain[0];
  a.rate[0] = std::log2(std::max(1e-300, 1.0 + a.power[0] * in.gain[0]));
  a.lagrangian = a.power[0] - in.beta[0] * a.rate[0];
  return a;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum-energy strategies for fading two-way relay networks"};
  app.require_subcommand(1);

  CommonFlags common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "Run configuration file");
    sub->add_option("--seed", common.seed, "Sampler seed (overrides the config)");
    sub->add_option("--samples", common.samples, "Number of channel samples (overrides the config)");
  };

  auto* solve = app.add_subcommand("solve", "Solve one strategy at one rate pair and print a row");
  add_common(solve);
  std::string strategy_name;
  double lambda1 = 0.0, lambda2 = 0.0;
  solve->add_option("--strategy", strategy_name, "PNC_ZP, PNC_SUP, DNC_TS, DNC_SUP, CW_SUP or POPT")
      ->required();
  solve->add_option("--lambda1", lambda1, "Rate from S1 to S2 (frames/slot)")->required();
  solve->add_option("--lambda2", lambda2, "Rate from S2 to S1 (frames/slot)")->required();

  auto* sweep = app.add_subcommand("sweep", "Run every strategy over the configured rate points");
  add_common(sweep);
  std::string output_override;
  sweep->add_option("--output", output_override, "Output CSV path (overrides output_path)");

  auto* verify = app.add_subcommand("verify", "Run the oracle and lemma suites");
  twrn::VerifyOptions vopt;
  std::string fault;
  verify->add_option("--seed", vopt.master_seed, "Master seed for randomized trials");
  verify->add_option("--lemma3-trials", vopt.lemma3_trials, "Random tuples for the Lemma 3 sweep");
  verify->add_option("--lemma4-trials", vopt.lemma4_trials, "Random tuples for the Lemma 4 sweep");
  verify->add_option("--oracle-trials", vopt.oracle_trials, "Random inputs per allocator");
  verify->add_option("--grid-points", vopt.grid_points, "Grid points per axis");
  verify->add_option("--inject-fault", fault, "")->group("")->check(CLI::IsMember({"unclamped-p2p"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*solve) {
      twrn::RunConfig cfg = base_config(common, false);
      cfg.strategies = {twrn::canonical_strategy_name(strategy_name)};
      cfg.sweep = {{lambda1, lambda2}};
      cfg.validate();
      const twrn::SweepResult result = twrn::run_sweep(cfg);
      twrn::write_csv(std::cout, result);
      for (const auto& row : result.rows)
        if (!row.converged) std::cerr << "error: " << row.error << '\n';
      return result.all_converged ? 0 : kExitFailure;
    }
    if (*sweep) {
      twrn::RunConfig cfg = base_config(common, true);
      if (!output_override.empty()) cfg.output_path = output_override;
      cfg.validate();
      const twrn::SweepResult result = twrn::run_sweep(cfg);
      if (cfg.output_path.empty() || cfg.output_path == "-") {
        twrn::write_csv(std::cout, result);
      } else {
        std::ofstream out(cfg.output_path, std::ios::binary);
        if (!out) {
          std::cerr << "error: cannot write '" << cfg.output_path << "'\n";
          return kExitFailure;
        }
        twrn::write_csv(out, result);
      }
      for (const auto& row : result.rows)
        if (!row.converged) std::cerr << "error: " << row.error << '\n';
      return result.all_converged ? 0 : kExitFailure;
    }
    if (*verify) {
      if (fault == "unclamped-p2p") vopt.allocator = unclamped_p2p;
      const twrn::VerifyReport report = twrn::run_verify(vopt);
      twrn::write_report(std::cout, report);
      return report.all_passed() ? 0 : kExitFailure;
    }
  } catch (const twrn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
