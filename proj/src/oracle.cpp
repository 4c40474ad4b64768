#include "twrn/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "twrn/errors.hpp"

namespace twrn {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double pow2m1(double r) { return std::expm1(r * std::numbers::ln2); }

struct Box {
  double lo = 0.0;
  double hi = 0.0;
};

// Minimises fn over a regular grid, then zooms in on the incumbent.
GridResult grid_1d(const std::function<double(double)>& fn, Box box, int n, int refinements) {
  GridResult best{kInf, {0.0, 0.0}};
  for (int pass = 0; pass <= refinements; ++pass) {
    const double h = (box.hi - box.lo) / (n - 1);
    for (int i = 0; i < n; ++i) {
      const double x = box.lo + h * i;
      const double v = fn(x);
      if (v < best.value) best = {v, {x, 0.0}};
    }
    box = {std::max(box.lo, best.point[0] - 2 * h), std::min(box.hi, best.point[0] + 2 * h)};
  }
  return best;
}

GridResult grid_2d(const std::function<double(double, double)>& fn, Box bx, Box by, int n,
                   int refinements) {
  GridResult best{kInf, {0.0, 0.0}};
  for (int pass = 0; pass <= refinements; ++pass) {
    const double hx = (bx.hi - bx.lo) / (n - 1);
    const double hy = (by.hi - by.lo) / (n - 1);
    for (int i = 0; i < n; ++i) {
      const double x = bx.lo + hx * i;
      for (int j = 0; j < n; ++j) {
        const double y = by.lo + hy * j;
        const double v = fn(x, y);
        if (v < best.value) best = {v, {x, y}};
      }
    }
    bx = {std::max(bx.lo, best.point[0] - 2 * hx), std::min(bx.hi, best.point[0] + 2 * hx)};
    by = {std::max(by.lo, best.point[1] - 2 * hy), std::min(by.hi, best.point[1] + 2 * hy)};
  }
  return best;
}

}  // namespace

std::string_view to_string(AllocatorId id) noexcept {
  switch (id) {
    case AllocatorId::P2p: return "p2p_waterfill";
    case AllocatorId::PncUplink: return "pnc_uplink_alloc";
    case AllocatorId::PncMode2: return "pnc_mode2_alloc";
    case AllocatorId::Superposition: return "bc_superposition_alloc";
    case AllocatorId::Mac: return "mac_uplink_alloc";
    case AllocatorId::Codeword: return "cw_downlink_alloc";
  }
  return "?";
}

ModeAllocation closed_form(AllocatorId id, const OracleInput& in) {
  switch (id) {
    case AllocatorId::P2p:
      return p2p_waterfill(in.beta[0], in.gain[0]);
    case AllocatorId::PncUplink:
      return pnc_uplink_alloc(in.beta[0], ChannelSample{in.gain[0], in.gain[1], 1.0, 1.0});
    case AllocatorId::PncMode2:
      return pnc_mode2_alloc(in.beta[0], ChannelSample{1.0, in.gain[0], 1.0, 1.0});
    case AllocatorId::Superposition:
      return bc_superposition_alloc(in.beta[0], in.beta[1], in.gain[0], in.gain[1]);
    case AllocatorId::Mac:
      return mac_uplink_alloc(in.beta[0], in.beta[1], in.gain[0], in.gain[1]);
    case AllocatorId::Codeword:
      return cw_downlink_alloc(in.beta[0], in.beta[1], in.gain[0], in.gain[1]);
  }
  return {};
}

std::vector<double> auto_bounds(AllocatorId id, const OracleInput& in) {
  const ModeAllocation a = closed_form(id, in);
  const double w = std::max(in.beta[0], in.beta[1]) * kLog2e;
  const double g_max = std::max(in.gain[0], in.gain[1]);
  auto power_axis = [&](double p) { return std::max({2.0 * p, w, 1e-6}); };
  switch (id) {
    case AllocatorId::P2p:
    case AllocatorId::PncMode2:
      return {power_axis(a.power[0])};
    case AllocatorId::PncUplink:
      return {std::max({2.0 * a.power[0] * in.gain[0], w * g_max, 1e-6})};
    case AllocatorId::Superposition: {
      const double r_max = std::log2(1.0 + w * g_max);
      return {std::max({2.0 * a.rate[0], r_max, 1e-6}), std::max({2.0 * a.rate[1], r_max, 1e-6})};
    }
    case AllocatorId::Mac:
    case AllocatorId::Codeword:
      return {power_axis(a.power[0]), power_axis(a.power[1])};
  }
  return {};
}

GridResult pointwise_grid_min(AllocatorId id, const OracleInput& in, const GridSpec& grid) {
  if (grid.points_per_axis < 2) throw ContractViolation("grid needs at least 2 points per axis");
  const std::vector<double> ub = grid.upper_bounds.empty() ? auto_bounds(id, in) : grid.upper_bounds;
  const int n = grid.points_per_axis;
  const int n1 = n * n;
  const auto [b0, b1] = in.beta;
  const auto [g0, g1] = in.gain;

  switch (id) {
    case AllocatorId::P2p:
    case AllocatorId::PncMode2:
      return grid_1d([&](double p) { return p - b0 * std::log2(1.0 + p * g0); }, {0.0, ub.at(0)},
                     n1, grid.refinements);
    case AllocatorId::PncUplink:
      // Axis is the common received SNR; channel inversion fixes both powers.
      return grid_1d(
          [&](double snr) {
            const double rate = std::max(0.0, std::log2(0.5 + snr));
            return snr / g0 + snr / g1 - b0 * rate;
          },
          {0.0, ub.at(0)}, n1, grid.refinements);
    case AllocatorId::Superposition:
      // Axes are (R_common, R_private).
      return grid_2d(
          [&](double rc, double rp) {
            const SuperpositionPower p = bc_superposition_power(rp, rc, g0, g1);
            return p.p_private + p.p_common - b1 * rc - b0 * rp;
          },
          {0.0, ub.at(0)}, {0.0, ub.at(1)}, n, grid.refinements);
    case AllocatorId::Mac:
      return grid_2d(
          [&](double ps, double pw) {
            const double rw = std::log2(1.0 + pw * g1);
            const double rs = std::log2(1.0 + ps * g0 / (1.0 + pw * g1));
            return ps + pw - b0 * rs - b1 * rw;
          },
          {0.0, ub.at(0)}, {0.0, ub.at(1)}, n, grid.refinements);
    case AllocatorId::Codeword:
      return grid_2d(
          [&](double p1, double p2) {
            return p1 + p2 - b0 * std::log2(1.0 + p1 * g0) - b1 * std::log2(1.0 + p2 * g1);
          },
          {0.0, ub.at(0)}, {0.0, ub.at(1)}, n, grid.refinements);
  }
  return {};
}

StaticGridResult static_strategy_grid(Strategy s, const RateRequirement& req,
                                      const ChannelSample& gains, const StaticGridSpec& grid) {
  req.validate();
  ChannelSample g = gains;
  double l1 = req.lambda1, l2 = req.lambda2;
  if (l1 > l2) {
    std::swap(l1, l2);
    g = g.swapped();
  }
  const double excess = l2 - l1;
  const double g_min_down = std::min(g.g_r1, g.g_r2);

  // Energy of each mode given its time fraction; the bits are fixed.
  using ModeEnergy = std::function<double(double)>;
  auto p2p = [](double bits, double gain) -> ModeEnergy {
    return [=](double f) { return f * pow2m1(bits / f) / gain; };
  };
  auto pnc = [&](double bits) -> ModeEnergy {
    const double h = 1.0 / g.g_1r + 1.0 / g.g_2r;
    return [=](double f) { return f * (std::exp2(bits / f) - 0.5) * h; };
  };
  auto mac = [&](double bits1, double bits2) -> ModeEnergy {
    const bool one_strong = g.g_1r >= g.g_2r;
    const double gs = one_strong ? g.g_1r : g.g_2r;
    const double gw = one_strong ? g.g_2r : g.g_1r;
    const double bs = one_strong ? bits1 : bits2;
    const double bw = one_strong ? bits2 : bits1;
    return [=](double f) {
      const double rs = bs / f, rw = bw / f;
      return f * (pow2m1(rw) / gw + std::exp2(rw) * pow2m1(rs) / gs);
    };
  };
  auto superposed = [&](double common, double priv) -> ModeEnergy {
    return [=](double f) {
      const SuperpositionPower p = bc_superposition_power(priv / f, common / f, g.g_r1, g.g_r2);
      return f * (p.p_private + p.p_common);
    };
  };
  auto codeword = [&](double to_s2, double to_s1) -> ModeEnergy {
    return [=](double f) { return f * (pow2m1(to_s1 / f) / g.g_r1 + pow2m1(to_s2 / f) / g.g_r2); };
  };

  std::vector<ModeEnergy> modes;
  switch (s) {
    case Strategy::PncZp:
      modes = {pnc(l2), p2p(l2, g_min_down)};
      break;
    case Strategy::PncSup:
      if (l1 > 0.0) modes.push_back(pnc(l1));
      if (excess > 0.0) modes.push_back(p2p(excess, g.g_2r));
      modes.push_back(superposed(l1, excess));
      break;
    case Strategy::DncTs:
      modes.push_back(mac(l1, l2));
      if (l1 > 0.0) modes.push_back(p2p(l1, g_min_down));
      if (excess > 0.0) modes.push_back(p2p(excess, g.g_r1));
      break;
    case Strategy::DncSup:
      modes = {mac(l1, l2), superposed(l1, excess)};
      break;
    case Strategy::CwSup:
      modes = {mac(l1, l2), codeword(l1, l2)};
      break;
  }

  auto finite_or_inf = [](double v) { return std::isfinite(v) ? v : kInf; };
  StaticGridResult out;
  const int n = grid.points_per_axis;
  if (modes.size() == 1) {
    out.energy = modes[0](1.0);
    out.fractions = {1.0};
  } else if (modes.size() == 2) {
    const GridResult r = grid_1d(
        [&](double f) {
          if (f <= 0.0 || f >= 1.0) return kInf;
          return finite_or_inf(modes[0](f) + modes[1](1.0 - f));
        },
        {0.0, 1.0}, n * n, grid.refinements);
    out.energy = r.value;
    out.fractions = {r.point[0], 1.0 - r.point[0]};
  } else {
    const GridResult r = grid_2d(
        [&](double fa, double fb) {
          const double fc = 1.0 - fa - fb;
          if (fa <= 0.0 || fb <= 0.0 || fc <= 0.0) return kInf;
          return finite_or_inf(modes[0](fa) + modes[1](fb) + modes[2](fc));
        },
        {0.0, 1.0}, {0.0, 1.0}, n, grid.refinements);
    out.energy = r.value;
    out.fractions = {r.point[0], r.point[1], 1.0 - r.point[0] - r.point[1]};
  }
  return out;
}

LemmaCheck lemma3_check(const ChannelSample& s, double f2, double f3, double r2, double r3) {
  LemmaCheck c;
  c.e_reference = f2 * pow2m1(r2) / std::min(s.g_r1, s.g_r2) + f3 * pow2m1(r3) / s.g_r1;
  const double f = f2 + f3;
  const SuperpositionPower p = bc_superposition_power(f3 * r3 / f, f2 * r2 / f, s.g_r1, s.g_r2);
  c.e_superposed = f * (p.p_private + p.p_common);
  c.holds = c.e_superposed <= c.e_reference + 1e-12 * std::max(1.0, c.e_reference);
  return c;
}

LemmaCheck lemma4_check(double g_r1, double g_r2, double r61, double r62) {
  LemmaCheck c;
  c.e_reference = pow2m1(r61) / g_r1 + pow2m1(r62) / g_r2;
  const bool strong_s1 = g_r1 >= g_r2;
  const bool more_to_s1 = r61 >= r62;
  SuperpositionPower p;
  if (more_to_s1) {
    // Cases i and iii: common carries R62, private tops S1 up to R61.
    c.case_index = strong_s1 ? 1 : 3;
    p = bc_superposition_power(r61 - r62, r62, g_r1, g_r2);
  } else if (strong_s1) {
    // Case ii: a single network-coded stream at R61.
    c.case_index = 2;
    p = bc_superposition_power(0.0, r61, g_r1, g_r2);
  } else {
    // Case iv: a single network-coded stream at R62.
    c.case_index = 4;
    p = bc_superposition_power(0.0, r62, g_r1, g_r2);
  }
  c.e_superposed = p.p_private + p.p_common;
  c.holds = c.e_superposed <= c.e_reference + 1e-12 * std::max(1.0, c.e_reference);
  return c;
}

}  // namespace twrn
