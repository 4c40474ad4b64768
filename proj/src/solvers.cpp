#include "twrn/solvers.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "twrn/errors.hpp"
#include "twrn/exact_sum.hpp"

namespace twrn {

std::string_view to_string(Strategy s) noexcept {
  switch (s) {
    case Strategy::PncZp: return "PNC_ZP";
    case Strategy::PncSup: return "PNC_SUP";
    case Strategy::DncTs: return "DNC_TS";
    case Strategy::DncSup: return "DNC_SUP";
    case Strategy::CwSup: return "CW_SUP";
  }
  return "?";
}

std::optional<Strategy> parse_strategy(std::string_view text) {
  std::string upper(text);
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  std::replace(upper.begin(), upper.end(), '-', '_');
  for (Strategy s : kAllStrategies)
    if (upper == to_string(s)) return s;
  return std::nullopt;
}

void RateRequirement::validate() const {
  if (!(std::isfinite(lambda1) && lambda1 >= 0.0)) throw ConfigError("lambda1", "must be >= 0");
  if (!(std::isfinite(lambda2) && lambda2 >= 0.0)) throw ConfigError("lambda2", "must be >= 0");
  if (lambda1 == 0.0 && lambda2 == 0.0) throw ConfigError("lambda", "both rates are zero");
}

std::vector<ModePlan> strategy_plan(Strategy s, double l1, double l2) {
  const double excess = l2 - l1;
  switch (s) {
    case Strategy::PncZp:
      return {{"1", ModeKind::PncUplink, {l2, 0.0}, {"R1", ""}},
              {"2", ModeKind::CommonBroadcast, {l2, 0.0}, {"R2", ""}}};
    case Strategy::PncSup:
      return {{"1", ModeKind::PncUplink, {l1, 0.0}, {"R1", ""}},
              {"2", ModeKind::UplinkFromS2, {excess, 0.0}, {"R22", ""}},
              {"3", ModeKind::SuperposedDownlink, {l1, excess}, {"R3c", "R3p"}}};
    case Strategy::DncTs:
      return {{"1", ModeKind::MacUplink, {l1, l2}, {"R11", "R12"}},
              {"2", ModeKind::CommonBroadcast, {l1, 0.0}, {"R2", ""}},
              {"3", ModeKind::DownlinkToS1, {excess, 0.0}, {"R3", ""}}};
    case Strategy::DncSup:
      return {{"1", ModeKind::MacUplink, {l1, l2}, {"R11", "R12"}},
              {"5", ModeKind::SuperposedDownlink, {l1, excess}, {"R5c", "R5p"}}};
    case Strategy::CwSup:
      return {{"1", ModeKind::MacUplink, {l1, l2}, {"R11", "R12"}},
              {"6", ModeKind::CodewordDownlink, {l1, l2}, {"R62", "R61"}}};
  }
  return {};
}

double StrategySolution::fraction(const std::string& mode) const {
  const auto it = fractions.find(mode);
  return it == fractions.end() ? 0.0 : it->second;
}

double StrategySolution::fraction_sum() const {
  double sum = 0.0;
  for (const auto& [_, f] : fractions) sum += f;
  return sum;
}

double energy_tolerance(const SolverConfig& cfg, double energy) {
  return 2.0 * cfg.eps_outer * std::max(1.0, std::abs(energy));
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int lead_stream(const ModePlan& m) { return m.bits[0] > 0.0 ? 0 : 1; }
bool is_active(const ModePlan& m) { return m.bits[0] > 0.0 || m.bits[1] > 0.0; }

struct OuterPoint {
  double fa = 0.0;
  double excess = 0.0;  ///< sum of fractions minus one; +-inf off the feasible side
  double gamma = 0.0;
  std::vector<double> f;
  std::vector<ModeAverages> avg;
};

class OuterSearch {
 public:
  OuterSearch(std::vector<ModePlan> plan, const SampleSet& set, const SolverConfig& cfg)
      : plan_(std::move(plan)), set_(set), cfg_(cfg), hints_(plan_.size()) {
    for (std::size_t i = 0; i < plan_.size(); ++i)
      if (is_active(plan_[i])) active_.push_back(i);
  }

  const std::vector<ModePlan>& plan() const { return plan_; }
  const std::vector<std::size_t>& active() const { return active_; }
  int evaluations() const { return evaluations_; }

  OuterPoint evaluate(double fa) {
    ++evaluations_;
    OuterPoint p;
    p.fa = fa;
    p.f.assign(plan_.size(), 0.0);
    p.avg.assign(plan_.size(), ModeAverages{});
    const std::size_t a = active_.front();
    const auto& anchor = plan_[a];
    try {
      const std::array<double, 2> targets = {anchor.bits[0] / fa, anchor.bits[1] / fa};
      const DualSolution d = mode_dual_solve(anchor.kind, targets, set_, cfg_, hints_[a]);
      p.avg[a] = d.avg;
      p.f[a] = fa;
      hints_[a] = d.avg.beta;
    } catch (const BracketError&) {
      p.excess = -kInf;
      return p;
    }
    p.gamma = p.avg[a].dual;
    if (!(p.gamma < 0.0)) {
      p.excess = kInf;
      return p;
    }
    double sum = fa;
    for (std::size_t k = 1; k < active_.size(); ++k) {
      const std::size_t i = active_[k];
      const auto& m = plan_[i];
      try {
        const DualSolution d = mode_equalize(m.kind, m.bits, p.gamma, set_, cfg_, hints_[i]);
        p.avg[i] = d.avg;
        hints_[i] = d.avg.beta;
      } catch (const BracketError&) {
        p.excess = -kInf;
        return p;
      }
      const int s = lead_stream(m);
      if (!(p.avg[i].rate[s] > 0.0)) {
        p.excess = kInf;
        return p;
      }
      p.f[i] = m.bits[s] / p.avg[i].rate[s];
      sum += p.f[i];
    }
    p.excess = sum - 1.0;
    return p;
  }

 private:
  std::vector<ModePlan> plan_;
  const SampleSet& set_;
  const SolverConfig& cfg_;
  std::vector<std::optional<std::array<double, 2>>> hints_;
  std::vector<std::size_t> active_;
  int evaluations_ = 0;
};

StrategySolution assemble(Strategy strategy, const OuterSearch& search, const OuterPoint& p,
                          bool swapped) {
  StrategySolution sol;
  sol.strategy = strategy;
  sol.swapped = swapped;
  sol.gamma = p.gamma;
  sol.converged = true;
  sol.iterations = search.evaluations();
  ExactSum energy;
  for (std::size_t i = 0; i < search.plan().size(); ++i) {
    const ModePlan& m = search.plan()[i];
    if (!is_active(m)) continue;
    const ModeAverages& avg = p.avg[i];
    sol.fractions[m.label] = p.f[i];
    sol.avg_powers[m.label] = avg.power;
    sol.kkt_residuals[m.label] = std::abs(avg.dual - p.gamma);
    energy.add(p.f[i] * avg.power);
    for (int k = 0; k < stream_count(m.kind); ++k) {
      const std::string& name = m.streams[k];
      sol.avg_rates[name] = avg.rate[k];
      sol.multipliers["beta_" + name] = avg.beta[k];
      if (m.bits[k] > 0.0) sol.rate_slack[name] = std::abs(p.f[i] * avg.rate[k] - m.bits[k]) / m.bits[k];
    }
  }
  sol.total_energy = energy.value();
  return sol;
}

StrategySolution solve_canonical(Strategy strategy, double l1, double l2, const SampleSet& set,
                                 const SolverConfig& cfg, bool swapped) {
  OuterSearch search(strategy_plan(strategy, l1, l2), set, cfg);
  if (search.active().size() == 1) {
    const OuterPoint p = search.evaluate(1.0);
    if (!std::isfinite(p.excess))
      throw InfeasibleError("single active mode cannot carry the requirement", 1.0);
    return assemble(strategy, search, p, swapped);
  }

  // Residual is centred in the acceptance window (1 - eps_outer, 1].
  const double half = 0.5 * cfg.eps_outer;
  auto accepted = [&](const OuterPoint& p) { return p.excess > -cfg.eps_outer && p.excess <= 0.0; };
  double closest = kInf;
  auto track = [&](const OuterPoint& p) {
    if (std::isfinite(p.excess) && std::abs(p.excess + half) < std::abs(closest - 1.0 + half))
      closest = 1.0 + p.excess;
  };

  // Bracketing pre-scan over k / 17, located by binary search since the
  // excess is increasing in the anchor fraction.
  constexpr int kGrid = 17;
  int k_lo = 0, k_hi = kGrid;
  OuterPoint lo{0.0, -kInf, 0.0, {}, {}};
  OuterPoint hi{1.0, kInf, 0.0, {}, {}};
  while (k_hi - k_lo > 1) {
    const int k = (k_lo + k_hi) / 2;
    OuterPoint p = search.evaluate(static_cast<double>(k) / kGrid);
    track(p);
    if (accepted(p)) return assemble(strategy, search, p, swapped);
    if (p.excess < -half) {
      if (p.excess < lo.excess) throw MonotonicityError("time-fraction sum is not monotone");
      lo = std::move(p);
      k_lo = k;
    } else {
      if (p.excess > hi.excess) throw MonotonicityError("time-fraction sum is not monotone");
      hi = std::move(p);
      k_hi = k;
    }
  }

  double r_lo = lo.excess + half, r_hi = hi.excess + half;
  int side = 0;
  for (int it = 0; it < cfg.max_iter && hi.fa - lo.fa > 1e-15; ++it) {
    double x = 0.5 * (lo.fa + hi.fa);
    if (std::isfinite(r_lo) && std::isfinite(r_hi)) {
      const double s = (lo.fa * r_hi - hi.fa * r_lo) / (r_hi - r_lo);
      if (s > lo.fa && s < hi.fa) x = s;
    }
    OuterPoint p = search.evaluate(x);
    track(p);
    if (accepted(p)) return assemble(strategy, search, p, swapped);
    if (p.excess < lo.excess - half || p.excess > hi.excess + half)
      throw MonotonicityError("time-fraction sum is not monotone in the anchor fraction");
    if (p.excess < -half) {
      r_lo = p.excess + half;
      if (side == -1) r_hi *= 0.5;
      side = -1;
      lo = std::move(p);
    } else {
      r_hi = p.excess + half;
      if (side == 1) r_lo *= 0.5;
      side = 1;
      hi = std::move(p);
    }
  }
  throw InfeasibleError("time-fraction search did not close the budget",
                        std::isfinite(closest) ? closest : 0.0);
}

}  // namespace

StrategySolution solve_strategy(Strategy s, const RateRequirement& req, const SampleSet& set,
                                const SolverConfig& cfg) {
  req.validate();
  cfg.validate();
  try {
    if (req.lambda1 > req.lambda2) {
      const SampleSet mirrored = set.swapped();
      return solve_canonical(s, req.lambda2, req.lambda1, mirrored, cfg, true);
    }
    return solve_canonical(s, req.lambda1, req.lambda2, set, cfg, false);
  } catch (const StrategyError&) {
    throw;
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw StrategyError(std::string(to_string(s)), e.what());
  }
}

StrategySolution solve_pnc_zp(const RateRequirement& req, const SampleSet& set, const SolverConfig& cfg) {
  return solve_strategy(Strategy::PncZp, req, set, cfg);
}
StrategySolution solve_pnc_sup(const RateRequirement& req, const SampleSet& set, const SolverConfig& cfg) {
  return solve_strategy(Strategy::PncSup, req, set, cfg);
}
StrategySolution solve_dnc_ts(const RateRequirement& req, const SampleSet& set, const SolverConfig& cfg) {
  return solve_strategy(Strategy::DncTs, req, set, cfg);
}
StrategySolution solve_dnc_sup(const RateRequirement& req, const SampleSet& set, const SolverConfig& cfg) {
  return solve_strategy(Strategy::DncSup, req, set, cfg);
}
StrategySolution solve_cw_sup(const RateRequirement& req, const SampleSet& set, const SolverConfig& cfg) {
  return solve_strategy(Strategy::CwSup, req, set, cfg);
}

const StrategySolution& choose(const StrategySolution& pnc_sup, const StrategySolution& dnc_sup,
                               const SolverConfig& cfg) {
  const double tol = energy_tolerance(cfg, dnc_sup.total_energy);
  return pnc_sup.total_energy < dnc_sup.total_energy - tol ? pnc_sup : dnc_sup;
}

Selection select_optimal(const RateRequirement& req, const SampleSet& set, const SolverConfig& cfg) {
  Selection sel;
  sel.pnc_sup = solve_pnc_sup(req, set, cfg);
  sel.dnc_sup = solve_dnc_sup(req, set, cfg);
  sel.best = choose(sel.pnc_sup, sel.dnc_sup, cfg);
  return sel;
}

}  // namespace twrn
