#pragma once

#include <array>
#include <map>
#include <numbers>
#include <string>

#include "twrn/channel.hpp"

namespace twrn {

inline constexpr double kLog2e = std::numbers::log2e;

/// Activation point of the PNC uplink: the relay decodes only when the water
/// level w satisfies w / (1/g_1r + 1/g_2r) > x0, where x0 is the root above 1
/// of x ln x - x + 1/2 = 0. Below it the best nonnegative-rate allocation is
/// to stay silent.
inline constexpr double kPncActivationRatio = 2.1555352035005025175;

/// Pointwise power/rate assignment of one mode at one channel sample.
///
/// Slot layout depends on the allocator; each function documents it. Unused
/// slots are zero.
struct ModeAllocation {
  std::array<double, 2> power{};
  std::array<double, 2> rate{};
  double lagrangian = 0.0;  ///< total power minus sum of beta * rate

  double total_power() const noexcept { return power[0] + power[1]; }
};

/// Named Lagrange multipliers (raw beta; water levels are beta * log2(e)).
using Multipliers = std::map<std::string, double>;

/// Single-user water-fill. power[0] = P, rate[0] = R.
ModeAllocation p2p_waterfill(double beta, double g);

/// PNC uplink under channel inversion. power = {P_11, P_12}, rate[0] = R_1.
ModeAllocation pnc_uplink_alloc(double beta1, const ChannelSample& s);

/// Uplink of the longer message's excess bits from S2: water-fill on g_2r.
ModeAllocation pnc_mode2_alloc(double beta2, const ChannelSample& s);

struct SuperpositionPower {
  double p_private = 0.0;
  double p_common = 0.0;
};

/// Powers needed to superimpose a private stream (to the receiver with gain
/// g_a) on a common stream (to both receivers). Throws ContractViolation on
/// negative rates.
SuperpositionPower bc_superposition_power(double r_private, double r_common, double g_a,
                                          double g_b);

/// Pointwise optimum of the superposition downlink.
/// power = {P_common, P_private}, rate = {R_common, R_private}.
ModeAllocation bc_superposition_alloc(double beta_p, double beta_c, double g_a, double g_b);

/// Two-user MAC with successive decoding, strong user decoded first.
/// Requires g_strong > g_weak. power = {P_strong, P_weak}, rate likewise.
ModeAllocation mac_uplink_alloc(double beta_strong, double beta_weak, double g_strong,
                                double g_weak);

/// MAC for sources S1, S2 in natural order: maps users to strong/weak per
/// sample (ties make S1 strong with g_weak one ulp lower).
/// power = {P_1, P_2}, rate = {R_1, R_2}.
ModeAllocation mac_uplink_users(double beta1, double beta2, const ChannelSample& s);

/// Relay superimposes both source codewords; each source cancels its own.
/// power = {P_61, P_62}, rate = {R_61, R_62}; stream 1 goes to S1 over g_r1.
ModeAllocation cw_downlink_alloc(double beta_1, double beta_2, double g_r1, double g_r2);

}  // namespace twrn
