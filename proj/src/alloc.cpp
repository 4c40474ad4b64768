#include "twrn/alloc.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>

#include "twrn/errors.hpp"

namespace twrn {
namespace {

void require_finite(const char* op, std::initializer_list<double> values) {
  for (double v : values)
    if (!std::isfinite(v)) throw NumericalError(std::string(op) + ": non-finite input");
}

double positive_part(double x) { return x > 0.0 ? x : 0.0; }

}  // namespace

ModeAllocation p2p_waterfill(double beta, double g) {
  require_finite("p2p_waterfill", {beta, g});
  ModeAllocation a;
  const double p = positive_part(beta * kLog2e - 1.0 / g);
  if (p > 0.0) {
    a.power[0] = p;
    a.rate[0] = std::log2(1.0 + p * g);
  }
  a.lagrangian = a.power[0] - beta * a.rate[0];
  return a;
}

ModeAllocation pnc_uplink_alloc(double beta1, const ChannelSample& s) {
  require_finite("pnc_uplink_alloc", {beta1, s.g_1r, s.g_2r});
  ModeAllocation a;
  const double h = 1.0 / s.g_1r + 1.0 / s.g_2r;
  const double x = beta1 * kLog2e / h;
  if (x > kPncActivationRatio) {
    // Common received SNR x - 1/2 at the relay; both powers invert to it.
    const double snr = x - 0.5;
    a.power[0] = snr / s.g_1r;
    a.power[1] = snr / s.g_2r;
    a.rate[0] = std::log2(x);
  }
  a.lagrangian = a.total_power() - beta1 * a.rate[0];
  return a;
}

ModeAllocation pnc_mode2_alloc(double beta2, const ChannelSample& s) {
  return p2p_waterfill(beta2, s.g_2r);
}

SuperpositionPower bc_superposition_power(double r_private, double r_common, double g_a,
                                          double g_b) {
  if (r_private < 0.0 || r_common < 0.0)
    throw ContractViolation("bc_superposition_power: negative rate");
  SuperpositionPower p;
  p.p_private = std::expm1(r_private * std::numbers::ln2) / g_a;
  if (g_a >= g_b) {
    p.p_common = std::expm1(r_common * std::numbers::ln2) * (1.0 / g_b + p.p_private);
  } else {
    p.p_common = std::exp2(r_private) * std::expm1(r_common * std::numbers::ln2) / g_a;
  }
  return p;
}

ModeAllocation bc_superposition_alloc(double beta_p, double beta_c, double g_a, double g_b) {
  require_finite("bc_superposition_alloc", {beta_p, beta_c, g_a, g_b});
  ModeAllocation a;
  const double wc = beta_c * kLog2e;
  const double wp = beta_p * kLog2e;
  double pc = 0.0;
  double pp = 0.0;

  if (g_a <= g_b) {
    // The private receiver is the weaker one, so the common stream costs the
    // same per bit: one water-fill, all rate to the larger multiplier.
    const double w = std::max(wc, wp);
    const double p = positive_part(w - 1.0 / g_a);
    if (p > 0.0) {
      const double r = std::log2(1.0 + p * g_a);
      const int k = wc >= wp ? 0 : 1;
      a.power[k] = p;
      a.rate[k] = r;
    }
  } else if (beta_p * g_a <= beta_c * g_b) {
    pc = positive_part(wc - 1.0 / g_b);
  } else if (wc - wp <= 1.0 / g_b - 1.0 / g_a) {
    pp = positive_part(wp - 1.0 / g_a);
  } else {
    pp = (wp * g_a - wc * g_b) / ((wc - wp) * g_a * g_b);
    pc = wc - 1.0 / g_b - pp;
  }

  if (g_a > g_b) {
    a.power = {pc, pp};
    if (pp > 0.0) a.rate[1] = std::log2(1.0 + pp * g_a);
    if (pc > 0.0) a.rate[0] = std::log2(1.0 + pc * g_b / (1.0 + pp * g_b));
  }
  a.lagrangian = a.total_power() - beta_c * a.rate[0] - beta_p * a.rate[1];
  return a;
}

ModeAllocation mac_uplink_alloc(double beta_strong, double beta_weak, double g_strong,
                                double g_weak) {
  require_finite("mac_uplink_alloc", {beta_strong, beta_weak, g_strong, g_weak});
  if (!(g_strong > g_weak)) throw ContractViolation("mac_uplink_alloc: need g_strong > g_weak");
  ModeAllocation a;
  const double ws = beta_strong * kLog2e;
  const double ww = beta_weak * kLog2e;
  double ps = 0.0;
  double pw = 0.0;

  if (ww <= ws) {
    ps = positive_part(ws - 1.0 / g_strong);
  } else if (ws * g_strong <= ww * g_weak) {
    pw = positive_part(ww - 1.0 / g_weak);
  } else if (ww - ws <= (g_strong - g_weak) / (g_strong * g_weak)) {
    ps = positive_part(ws - 1.0 / g_strong);
  } else {
    ps = (ws * g_strong - ww * g_weak) / (g_strong - g_weak);
    pw = (ww - ws) * g_strong / (g_strong - g_weak) - 1.0 / g_weak;
  }

  a.power = {ps, pw};
  if (pw > 0.0) a.rate[1] = std::log2(1.0 + pw * g_weak);
  if (ps > 0.0) a.rate[0] = std::log2(1.0 + ps * g_strong / (1.0 + pw * g_weak));
  a.lagrangian = ps + pw - beta_strong * a.rate[0] - beta_weak * a.rate[1];
  return a;
}

ModeAllocation mac_uplink_users(double beta1, double beta2, const ChannelSample& s) {
  if (s.g_1r >= s.g_2r) {
    const double g_weak = s.g_1r > s.g_2r ? s.g_2r : std::nextafter(s.g_2r, 0.0);
    return mac_uplink_alloc(beta1, beta2, s.g_1r, g_weak);
  }
  ModeAllocation a = mac_uplink_alloc(beta2, beta1, s.g_2r, s.g_1r);
  std::swap(a.power[0], a.power[1]);
  std::swap(a.rate[0], a.rate[1]);
  return a;
}

ModeAllocation cw_downlink_alloc(double beta_1, double beta_2, double g_r1, double g_r2) {
  const ModeAllocation to1 = p2p_waterfill(beta_1, g_r1);
  const ModeAllocation to2 = p2p_waterfill(beta_2, g_r2);
  ModeAllocation a;
  a.power = {to1.power[0], to2.power[0]};
  a.rate = {to1.rate[0], to2.rate[0]};
  a.lagrangian = to1.lagrangian + to2.lagrangian;
  return a;
}

}  // namespace twrn
