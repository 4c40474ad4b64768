#include <cmath>

#include "doctest.h"
#include "twrn/errors.hpp"
#include "twrn/exact_sum.hpp"
#include "twrn/solvers.hpp"

using namespace twrn;

namespace {

const SampleSet& shared_set() {
  static const SampleSet set =
      sample_channels({1, 1, 1, 2, 20000, 2024, Distribution::RayleighPowerGain});
  return set;
}

const SampleSet& unit_set() {
  static const SampleSet set =
      sample_channels({1, 1, 1, 1, 20000, 99, Distribution::RayleighPowerGain});
  return set;
}

bool close(const StrategySolution& a, const StrategySolution& b, const SolverConfig& cfg) {
  return std::abs(a.total_energy - b.total_energy) <= energy_tolerance(cfg, a.total_energy);
}

void check_certificate(const StrategySolution& s, const SolverConfig& cfg) {
  CHECK(s.converged);
  CHECK(s.fraction_sum() <= 1.0);
  CHECK(s.fraction_sum() >= 1.0 - cfg.eps_outer);
  for (const auto& [mode, r] : s.kkt_residuals) {
    INFO("mode " << mode);
    CHECK(r < cfg.eps_outer);
  }
  for (const auto& [stream, slack] : s.rate_slack) {
    INFO("stream " << stream);
    CHECK(slack < cfg.eps_outer);
  }
  ExactSum e;
  for (const auto& [mode, f] : s.fractions) e.add(f * s.avg_powers.at(mode));
  CHECK(s.total_energy == e.value());
}

}  // namespace

TEST_CASE("strategy names round-trip") {
  for (Strategy s : kAllStrategies) CHECK(parse_strategy(to_string(s)) == s);
  CHECK(parse_strategy("dnc-sup") == Strategy::DncSup);
  CHECK_FALSE(parse_strategy("popt").has_value());
}

TEST_CASE("requirement validation") {
  CHECK_THROWS_AS((RateRequirement{0, 0}.validate()), ConfigError);
  CHECK_THROWS_AS((RateRequirement{-1, 1}.validate()), ConfigError);
  CHECK_NOTHROW((RateRequirement{0, 1}.validate()));
}

TEST_CASE("symmetric traffic drops the excess modes") {
  const SolverConfig cfg;
  const StrategySolution pnc = solve_pnc_sup({0.6, 0.6}, shared_set(), cfg);
  CHECK(pnc.fraction("2") == 0.0);
  CHECK(pnc.avg_rates.at("R3p") == 0.0);
  check_certificate(pnc, cfg);

  const StrategySolution zp = solve_pnc_zp({0.6, 0.6}, shared_set(), cfg);
  CHECK(close(pnc, zp, cfg));

  const StrategySolution ts = solve_dnc_ts({0.6, 0.6}, shared_set(), cfg);
  const StrategySolution sup = solve_dnc_sup({0.6, 0.6}, shared_set(), cfg);
  CHECK(ts.fraction("3") == 0.0);
  CHECK(close(ts, sup, cfg));
}

TEST_CASE("zero padding depends only on the larger rate") {
  const SolverConfig cfg;
  const StrategySolution a = solve_pnc_zp({0.2, 1.0}, shared_set(), cfg);
  const StrategySolution b = solve_pnc_zp({0.8, 1.0}, shared_set(), cfg);
  CHECK(a.total_energy == b.total_energy);
  const StrategySolution sup = solve_pnc_sup({0.2, 1.0}, shared_set(), cfg);
  CHECK(a.total_energy >= sup.total_energy);
  check_certificate(sup, cfg);
}

TEST_CASE("superposition beats time sharing for the excess bits") {
  const SolverConfig cfg;
  for (RateRequirement r : {RateRequirement{0.2, 0.9}, RateRequirement{0.5, 0.7}}) {
    const StrategySolution ts = solve_dnc_ts(r, shared_set(), cfg);
    const StrategySolution sup = solve_dnc_sup(r, shared_set(), cfg);
    check_certificate(ts, cfg);
    check_certificate(sup, cfg);
    CHECK(sup.total_energy <= ts.total_energy + energy_tolerance(cfg, ts.total_energy));
  }
}

TEST_CASE("one-way traffic reduces CW-Sup to water-fills") {
  const SolverConfig cfg;
  const StrategySolution cw = solve_cw_sup({0.0, 0.6}, unit_set(), cfg);
  CHECK(cw.avg_rates.at("R62") == 0.0);
  CHECK(cw.avg_rates.at("R11") == 0.0);
  CHECK(cw.multipliers.at("beta_R62") == 0.0);
  check_certificate(cw, cfg);
}

TEST_CASE("swapping the sources mirrors the solution") {
  const SolverConfig cfg;
  const SampleSet& set = shared_set();
  const SampleSet mirrored = set.swapped();
  for (Strategy s : kAllStrategies) {
    const StrategySolution a = solve_strategy(s, {0.3, 0.8}, set, cfg);
    const StrategySolution b = solve_strategy(s, {0.8, 0.3}, mirrored, cfg);
    CHECK_FALSE(a.swapped);
    CHECK(b.swapped);
    CHECK(close(a, b, cfg));
  }
}

TEST_CASE("energy grows with either rate") {
  const SolverConfig cfg;
  for (Strategy s : {Strategy::PncSup, Strategy::DncSup, Strategy::CwSup}) {
    double last = 0.0;
    for (double l2 : {0.3, 0.5, 0.7}) {
      const double e = solve_strategy(s, {0.3, l2}, unit_set(), cfg).total_energy;
      CHECK(e >= last - energy_tolerance(cfg, e));
      last = e;
    }
    last = 0.0;
    for (double l1 : {0.1, 0.4, 0.7}) {
      const double e = solve_strategy(s, {l1, 0.7}, unit_set(), cfg).total_energy;
      CHECK(e >= last - energy_tolerance(cfg, e));
      last = e;
    }
  }
}

TEST_CASE("optimal selection") {
  const SolverConfig cfg;
  CHECK(select_optimal({0.4, 0.4}, shared_set(), cfg).best.strategy == Strategy::DncSup);
  CHECK(select_optimal({1.6, 1.6}, shared_set(), cfg).best.strategy == Strategy::PncSup);
  const Selection one_way = select_optimal({0.0, 0.5}, shared_set(), cfg);
  CHECK(one_way.best.strategy == Strategy::DncSup);
  CHECK(one_way.best.total_energy <= one_way.pnc_sup.total_energy + energy_tolerance(cfg, 1));
}

TEST_CASE("failures name the strategy") {
  SolverConfig cfg;
  cfg.bracket_max = 1e-3;
  try {
    solve_dnc_sup({0.5, 0.5}, shared_set(), cfg);
    FAIL("expected a failure");
  } catch (const StrategyError& e) {
    CHECK(e.strategy() == "DNC_SUP");
  }
  cfg = {};
  cfg.eps_outer = 1e-7;
  CHECK_THROWS_AS(solve_dnc_sup({0.5, 0.5}, shared_set(), cfg), ConfigError);
}
