#include "twrn/runner.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>

#include "twrn/errors.hpp"

namespace twrn {
namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string fmt_e(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

SweepResult run_sweep(const RunConfig& config) {
  config.validate();
  const SampleSet samples = sample_channels(config.fading);
  return run_sweep(config, samples);
}

SweepResult run_sweep(const RunConfig& config, const SampleSet& samples) {
  SweepResult result;
  // Solutions keyed by (strategy name, sweep index) so POPT can reuse them.
  std::map<std::pair<std::string, std::size_t>, SweepRow> cache;

  std::function<const SweepRow&(const std::string&, std::size_t)> solve_row;
  solve_row = [&](const std::string& name, std::size_t i) -> const SweepRow& {
    const auto key = std::make_pair(name, i);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    SweepRow row;
    row.strategy = name;
    row.req = config.sweep[i];
    try {
      if (name == "POPT") {
        const SweepRow& pnc = solve_row("PNC_SUP", i);
        const SweepRow& dnc = solve_row("DNC_SUP", i);
        if (!pnc.converged) throw StrategyError("PNC_SUP", pnc.error);
        if (!dnc.converged) throw StrategyError("DNC_SUP", dnc.error);
        row.solution = choose(pnc.solution, dnc.solution, config.solver);
      } else {
        row.solution = solve_strategy(*parse_strategy(name), row.req, samples, config.solver);
      }
      row.converged = row.solution.converged;
    } catch (const Error& e) {
      row.converged = false;
      row.error = e.what();
    }
    return cache.emplace(key, std::move(row)).first->second;
  };

  for (const auto& name : config.strategies) {
    for (std::size_t i = 0; i < config.sweep.size(); ++i) {
      const SweepRow& row = solve_row(name, i);
      result.all_converged = result.all_converged && row.converged;
      result.rows.push_back(row);
    }
  }
  return result;
}

void write_row(std::ostream& out, const SweepRow& row) {
  const double nan = std::nan("");
  const StrategySolution& s = row.solution;
  auto frac = [&](const char* mode) { return row.converged ? s.fraction(mode) : nan; };
  out << row.strategy << ',' << fmt(row.req.lambda1) << ',' << fmt(row.req.lambda2) << ','
      << fmt(row.converged ? s.total_energy : nan) << ',' << fmt(frac("1")) << ','
      << fmt(frac("2")) << ',' << fmt(frac("3")) << ',' << fmt(frac("5")) << ','
      << fmt(frac("6")) << ',' << fmt(row.converged ? s.gamma : nan) << ','
      << (row.converged ? s.iterations : 0) << ',' << (row.converged ? 1 : 0) << '\n';
}

void write_csv(std::ostream& out, const SweepResult& result) {
  out << kCsvHeader << '\n';
  for (const auto& row : result.rows) write_row(out, row);
}

void VerifyOptions::validate() const {
  if (lemma3_trials < 1) throw ConfigError("lemma3_trials", "must be at least 1");
  if (lemma4_trials < 1) throw ConfigError("lemma4_trials", "must be at least 1");
  if (oracle_trials < 1) throw ConfigError("oracle_trials", "must be at least 1");
  if (grid_points < 2) throw ConfigError("grid_points", "must be at least 2");
}

bool VerifyReport::all_passed() const {
  for (const auto& c : checks)
    if (!c.passed()) return false;
  return true;
}

namespace {

double exp_gain(std::mt19937_64& rng) {
  std::exponential_distribution<double> d(1.0);
  for (;;) {
    const double g = d(rng);
    if (g > 1e-6) return g;
  }
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

CheckResult verify_lemma3(std::uint64_t seed, std::int64_t trials) {
  CheckResult c{"lemma3_superposition_vs_timesharing", trials, 0, -INFINITY, ""};
  std::mt19937_64 rng(seed);
  for (std::int64_t t = 0; t < trials; ++t) {
    ChannelSample s;
    s.g_r1 = exp_gain(rng);
    s.g_r2 = exp_gain(rng);
    const double f2 = uniform(rng, 0.01, 1.0);
    const double f3 = uniform(rng, 0.01, 1.0);
    const double r2 = uniform(rng, 0.01, 4.0);
    const double r3 = uniform(rng, 0.01, 4.0);
    const LemmaCheck k = lemma3_check(s, f2, f3, r2, r3);
    c.worst = std::max(c.worst, k.e_superposed - k.e_reference);
    if (!k.holds) ++c.failures;
  }
  return c;
}

CheckResult verify_lemma4(std::uint64_t seed, std::int64_t trials) {
  CheckResult c{"lemma4_superposition_vs_codeword", trials, 0, -INFINITY, ""};
  std::mt19937_64 rng(seed);
  std::array<std::int64_t, 5> seen{}, failed{};
  for (std::int64_t t = 0; t < trials; ++t) {
    const double g1 = exp_gain(rng);
    const double g2 = exp_gain(rng);
    const double r61 = uniform(rng, 0.0, 4.0);
    const double r62 = uniform(rng, 0.0, 4.0);
    const LemmaCheck k = lemma4_check(g1, g2, r61, r62);
    ++seen[k.case_index];
    c.worst = std::max(c.worst, k.e_superposed - k.e_reference);
    if (!k.holds) {
      ++c.failures;
      ++failed[k.case_index];
    }
  }
  for (int i = 1; i <= 4; ++i) {
    static constexpr const char* names[] = {"", "i", "ii", "iii", "iv"};
    c.detail += std::string(i > 1 ? " " : "") + "case " + names[i] + ": " +
                std::to_string(failed[i]) + "/" + std::to_string(seen[i]) + " failed;";
  }
  return c;
}

CheckResult verify_allocator(AllocatorId id, const VerifyOptions& options) {
  CheckResult c{"oracle_" + std::string(to_string(id)), options.oracle_trials, 0, 0.0, ""};
  std::mt19937_64 rng(options.master_seed + 1000 + static_cast<std::uint64_t>(id));
  GridSpec grid;
  grid.points_per_axis = options.grid_points;
  for (std::int64_t t = 0; t < options.oracle_trials; ++t) {
    OracleInput in;
    in.beta = {uniform(rng, 0.0, 5.0) / kLog2e, uniform(rng, 0.0, 5.0) / kLog2e};
    in.gain = {exp_gain(rng), exp_gain(rng)};
    if (id == AllocatorId::Mac) {
      if (in.gain[0] == in.gain[1]) in.gain[1] = std::nextafter(in.gain[1], 0.0);
      if (in.gain[0] < in.gain[1]) std::swap(in.gain[0], in.gain[1]);
    }
    const ModeAllocation a = options.allocator(id, in);
    // Bounds come from the allocator under test but never shrink below the
    // feasible water level, so a broken allocator cannot hide the optimum.
    grid.upper_bounds = auto_bounds(id, in);
    for (std::size_t k = 0; k < grid.upper_bounds.size(); ++k) {
      const double scale = id == AllocatorId::Superposition ? std::abs(a.rate[k]) : std::abs(a.power[k]);
      grid.upper_bounds[k] = std::max(grid.upper_bounds[k], 2.0 * scale);
    }
    const GridResult g = pointwise_grid_min(id, in, grid);
    const double gap = std::abs(a.lagrangian - g.value);
    c.worst = std::max(c.worst, gap);
    if (!(gap <= options.oracle_tolerance)) ++c.failures;
  }
  return c;
}

const std::vector<StaticCase>& static_test_matrix() {
  static const std::vector<StaticCase> cases = {
      {Strategy::PncSup, {0.5, 0.5}, {1.0, 1.0, 1.0, 1.0}},
      {Strategy::PncZp, {0.3, 0.6}, {1.0, 1.0, 1.0, 2.0}},
      {Strategy::DncTs, {0.3, 0.6}, {1.0, 1.0, 1.0, 1.0}},
      {Strategy::DncSup, {0.3, 0.6}, {1.0, 1.0, 1.0, 2.0}},
      {Strategy::CwSup, {0.3, 0.6}, {1.0, 1.0, 1.0, 1.0}},
      {Strategy::PncSup, {0.3, 0.6}, {1.0, 2.0, 2.0, 1.0}},
  };
  return cases;
}

CheckResult verify_static_matrix(const VerifyOptions& options) {
  const auto& cases = static_test_matrix();
  CheckResult c{"static_solver_vs_grid", static_cast<std::int64_t>(cases.size()), 0, 0.0, ""};
  const SolverConfig cfg;
  for (const auto& sc : cases) {
    FadingSpec spec{sc.gains.g_1r, sc.gains.g_2r, sc.gains.g_r1, sc.gains.g_r2, 1, 0,
                    Distribution::Static};
    const SampleSet set = sample_channels(spec);
    double rel = INFINITY;
    std::string note;
    try {
      const StrategySolution sol = solve_strategy(sc.strategy, sc.req, set, cfg);
      const StaticGridResult grid = static_strategy_grid(sc.strategy, sc.req, sc.gains);
      rel = std::abs(sol.total_energy - grid.energy) / grid.energy;
      note = fmt(sol.total_energy) + " vs " + fmt(grid.energy);
    } catch (const Error& e) {
      note = e.what();
    }
    c.worst = std::max(c.worst, rel);
    if (!(rel <= options.static_tolerance)) ++c.failures;
    c.detail += std::string(c.detail.empty() ? "" : " ") + std::string(to_string(sc.strategy)) +
                "(" + fmt(sc.req.lambda1) + "," + fmt(sc.req.lambda2) + "): " + note + ";";
  }
  return c;
}

VerifyReport run_verify(const VerifyOptions& options) {
  options.validate();
  VerifyReport report;
  report.checks.push_back(verify_lemma3(options.master_seed + 3, options.lemma3_trials));
  report.checks.push_back(verify_lemma4(options.master_seed + 4, options.lemma4_trials));
  for (AllocatorId id : kAllAllocators) report.checks.push_back(verify_allocator(id, options));
  report.checks.push_back(verify_static_matrix(options));
  return report;
}

void write_report(std::ostream& out, const VerifyReport& report) {
  for (const auto& c : report.checks) {
    out << (c.passed() ? "PASS " : "FAIL ") << c.name << " trials=" << c.trials
        << " failures=" << c.failures << " worst=" << fmt_e(c.worst);
    if (!c.detail.empty()) out << " " << c.detail;
    out << '\n';
  }
  out << (report.all_passed() ? "all checks passed" : "some checks failed") << '\n';
}

}  // namespace twrn
