#include "twrn/modes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "twrn/errors.hpp"

namespace twrn {

void SolverConfig::validate() const {
  if (!(eps_inner > 0.0 && std::isfinite(eps_inner)))
    throw ConfigError("eps_inner", "must be a positive finite number");
  if (!(eps_outer > 0.0 && std::isfinite(eps_outer)))
    throw ConfigError("eps_outer", "must be a positive finite number");
  if (!(eps_inner < eps_outer)) throw ConfigError("eps_inner", "must be smaller than eps_outer");
  if (max_iter < 1) throw ConfigError("max_iter", "must be at least 1");
  if (!(bracket_max > 0.0 && std::isfinite(bracket_max)))
    throw ConfigError("bracket_max", "must be a positive finite number");
  if (threads < 1) throw ConfigError("threads", "must be at least 1");
}

std::string_view to_string(ModeKind kind) noexcept {
  switch (kind) {
    case ModeKind::PncUplink: return "pnc_uplink";
    case ModeKind::UplinkFromS2: return "uplink_s2";
    case ModeKind::CommonBroadcast: return "common_broadcast";
    case ModeKind::DownlinkToS1: return "downlink_s1";
    case ModeKind::MacUplink: return "mac_uplink";
    case ModeKind::SuperposedDownlink: return "superposed_downlink";
    case ModeKind::CodewordDownlink: return "codeword_downlink";
  }
  return "?";
}

int stream_count(ModeKind kind) noexcept {
  switch (kind) {
    case ModeKind::MacUplink:
    case ModeKind::SuperposedDownlink:
    case ModeKind::CodewordDownlink:
      return 2;
    default:
      return 1;
  }
}

ModeAllocation allocate(ModeKind kind, const std::array<double, 2>& beta, const ChannelSample& s) {
  switch (kind) {
    case ModeKind::PncUplink:
      return pnc_uplink_alloc(beta[0], s);
    case ModeKind::UplinkFromS2:
      return pnc_mode2_alloc(beta[0], s);
    case ModeKind::CommonBroadcast:
      return p2p_waterfill(beta[0], std::min(s.g_r1, s.g_r2));
    case ModeKind::DownlinkToS1:
      return p2p_waterfill(beta[0], s.g_r1);
    case ModeKind::MacUplink:
      return mac_uplink_users(beta[0], beta[1], s);
    case ModeKind::SuperposedDownlink:
      return bc_superposition_alloc(beta[1], beta[0], s.g_r1, s.g_r2);
    case ModeKind::CodewordDownlink: {
      ModeAllocation a = cw_downlink_alloc(beta[1], beta[0], s.g_r1, s.g_r2);
      std::swap(a.power[0], a.power[1]);
      std::swap(a.rate[0], a.rate[1]);
      return a;
    }
  }
  return {};
}

ModeAverages ModeAverages::mix(const ModeAverages& lo, const ModeAverages& hi, double theta) {
  auto lerp = [theta](double a, double b) { return a + theta * (b - a); };
  ModeAverages m;
  for (int k = 0; k < 2; ++k) {
    m.beta[k] = lerp(lo.beta[k], hi.beta[k]);
    m.rate[k] = lerp(lo.rate[k], hi.rate[k]);
  }
  m.power = lerp(lo.power, hi.power);
  m.dual = lerp(lo.dual, hi.dual);
  return m;
}

ModeAverages evaluate_mode(ModeKind kind, const std::array<double, 2>& beta, const SampleSet& set,
                           unsigned threads) {
  const auto sums = expect_n<3>(
      set,
      [&](const ChannelSample& s) {
        const ModeAllocation a = allocate(kind, beta, s);
        return std::array<double, 3>{a.total_power(), a.rate[0], a.rate[1]};
      },
      ExpectOptions{threads});
  ModeAverages m;
  m.beta = beta;
  m.power = sums[0];
  m.rate = {sums[1], sums[2]};
  m.dual = m.power - beta[0] * m.rate[0] - beta[1] * m.rate[1];
  return m;
}

RootResult find_monotone_root(const std::function<ModeAverages(double)>& at,
                              const std::function<double(const ModeAverages&)>& residual,
                              double guess, double tol, const SolverConfig& cfg,
                              std::string_view what) {
  struct Point {
    double x;
    ModeAverages a;
    double r;
  };
  RootResult out;
  auto eval = [&](double x) {
    ++out.evaluations;
    ModeAverages a = at(x);
    const double r = residual(a);
    if (!std::isfinite(r)) throw NumericalError(std::string(what) + ": residual is not finite");
    return Point{x, a, r};
  };
  auto done = [&](const Point& p) {
    out.x = p.x;
    out.at = p.a;
    return out;
  };
  auto non_monotone = [&] {
    return MonotonicityError(std::string(what) + ": residual is not monotone in the multiplier");
  };

  const bool hinted = std::isfinite(guess) && guess > 0.0;
  double step = hinted ? 1.1 : 4.0;
  Point p = eval(std::min(hinted ? guess : 1.0, cfg.bracket_max));
  if (std::abs(p.r) <= tol) return done(p);

  Point lo = p, hi = p;
  if (p.r < 0.0) {
    for (;;) {
      if (lo.x >= cfg.bracket_max)
        throw BracketError(std::string(what), lo.r, 0.0);
      Point q = eval(std::min(lo.x * step, cfg.bracket_max));
      step = std::min(step * step, 1e6);
      if (q.r < lo.r - tol) throw non_monotone();
      if (std::abs(q.r) <= tol) return done(q);
      if (q.r > 0.0) {
        hi = q;
        break;
      }
      lo = q;
    }
  } else {
    for (;;) {
      if (hi.x == 0.0) return done(hi);  // cannot go below zero
      double x = hi.x / step;
      step = std::min(step * step, 1e6);
      if (x < 1e-200) x = 0.0;
      Point q = eval(x);
      if (q.r > hi.r + tol) throw non_monotone();
      if (std::abs(q.r) <= tol) return done(q);
      if (q.r < 0.0) {
        lo = q;
        break;
      }
      hi = q;
    }
  }

  // Illinois regula falsi with a bisection fallback.
  double r_lo = lo.r, r_hi = hi.r;
  int side = 0, same_side = 0;
  for (int it = 0; it < cfg.max_iter; ++it) {
    if (hi.x - lo.x <= 0x1p-50 * hi.x) break;
    double x = (lo.x * r_hi - hi.x * r_lo) / (r_hi - r_lo);
    if (same_side >= 3 || !(x > lo.x && x < hi.x)) {
      x = lo.x > 0.0 && hi.x > 64.0 * lo.x ? std::sqrt(lo.x * hi.x) : 0.5 * (lo.x + hi.x);
      same_side = 0;
    }
    Point q = eval(x);
    if (q.r < lo.r - tol || q.r > hi.r + tol) throw non_monotone();
    if (std::abs(q.r) <= tol) return done(q);
    if (q.r < 0.0) {
      lo = q;
      r_lo = q.r;
      if (side == -1) {
        r_hi *= 0.5;
        ++same_side;
      } else {
        same_side = 0;
      }
      side = -1;
    } else {
      hi = q;
      r_hi = q.r;
      if (side == 1) {
        r_lo *= 0.5;
        ++same_side;
      } else {
        same_side = 0;
      }
      side = 1;
    }
  }

  const double theta = -lo.r / (hi.r - lo.r);
  out.x = lo.x + theta * (hi.x - lo.x);
  out.at = ModeAverages::mix(lo.a, hi.a, theta);
  out.mixed = true;
  return out;
}

namespace {

// Shared driver: `outer_residual` closes the problem on the leading active
// stream; with two active streams an inner search keeps R1 / R0 = ratio.
DualSolution solve_streams(ModeKind kind, const std::array<bool, 2>& active, double ratio,
                           const std::function<double(const ModeAverages&)>& outer_residual,
                           const SampleSet& set, const SolverConfig& cfg,
                           std::optional<std::array<double, 2>> hint, std::string_view what) {
  DualSolution sol;
  const int lead = active[0] ? 0 : 1;
  auto hint_of = [&](int k) { return hint ? (*hint)[k] : 0.0; };

  if (!(active[0] && active[1])) {
    auto at = [&](double b) {
      std::array<double, 2> beta{};
      beta[lead] = b;
      return evaluate_mode(kind, beta, set, cfg.threads);
    };
    const RootResult r = find_monotone_root(at, outer_residual, hint_of(lead), cfg.eps_inner, cfg, what);
    sol.avg = r.at;
    sol.evaluations = r.evaluations;
    return sol;
  }

  double inner_ratio = hint && (*hint)[0] > 0.0 && (*hint)[1] > 0.0 ? (*hint)[1] / (*hint)[0] : 1.0;
  auto inner_residual = [ratio](const ModeAverages& m) { return m.rate[1] - ratio * m.rate[0]; };
  auto at = [&](double b0) {
    auto inner_at = [&](double b1) { return evaluate_mode(kind, {b0, b1}, set, cfg.threads); };
    const RootResult r =
        find_monotone_root(inner_at, inner_residual, b0 * inner_ratio, cfg.eps_inner, cfg, what);
    sol.evaluations += r.evaluations;
    if (b0 > 0.0 && r.x > 0.0) inner_ratio = r.x / b0;
    return r.at;
  };
  const RootResult r = find_monotone_root(at, outer_residual, hint_of(0), cfg.eps_inner, cfg, what);
  sol.avg = r.at;
  return sol;
}

std::array<bool, 2> active_streams(ModeKind kind, const std::array<double, 2>& amounts) {
  for (double v : amounts)
    if (!(std::isfinite(v) && v >= 0.0)) throw ContractViolation("stream amounts must be >= 0");
  const bool two = stream_count(kind) == 2;
  return {amounts[0] > 0.0, two && amounts[1] > 0.0};
}

}  // namespace

DualSolution mode_dual_solve(ModeKind kind, const std::array<double, 2>& targets,
                             const SampleSet& set, const SolverConfig& cfg,
                             std::optional<std::array<double, 2>> hint) {
  const auto active = active_streams(kind, targets);
  if (!active[0] && !active[1]) return {evaluate_mode(kind, {0.0, 0.0}, set, cfg.threads), 1};
  const int lead = active[0] ? 0 : 1;
  const double ratio = active[0] && active[1] ? targets[1] / targets[0] : 0.0;
  const double target = targets[lead];
  const std::string what = "rate target for " + std::string(to_string(kind));
  try {
    return solve_streams(
        kind, active, ratio, [&](const ModeAverages& m) { return m.rate[lead] - target; }, set,
        cfg, hint, what);
  } catch (const BracketError& e) {
    throw BracketError(what, e.achieved() + target, target);
  }
}

DualSolution mode_equalize(ModeKind kind, const std::array<double, 2>& bits, double gamma,
                           const SampleSet& set, const SolverConfig& cfg,
                           std::optional<std::array<double, 2>> hint) {
  const auto active = active_streams(kind, bits);
  if (!active[0] && !active[1]) return {evaluate_mode(kind, {0.0, 0.0}, set, cfg.threads), 1};
  if (!(gamma < 0.0)) throw ContractViolation("mode_equalize: gamma must be negative");
  const double ratio = active[0] && active[1] ? bits[1] / bits[0] : 0.0;
  const std::string what = "dual level for " + std::string(to_string(kind));
  try {
    return solve_streams(
        kind, active, ratio, [gamma](const ModeAverages& m) { return gamma - m.dual; }, set, cfg,
        hint, what);
  } catch (const BracketError& e) {
    throw BracketError(what, gamma - e.achieved(), gamma);
  }
}

}  // namespace twrn
