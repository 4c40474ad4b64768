#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "twrn/alloc.hpp"
#include "twrn/channel.hpp"
#include "twrn/solvers.hpp"

namespace twrn {

/// Allocators checked by the brute-force grids.
enum class AllocatorId { P2p, PncUplink, PncMode2, Superposition, Mac, Codeword };

inline constexpr std::array<AllocatorId, 6> kAllAllocators = {
    AllocatorId::P2p,  AllocatorId::PncUplink, AllocatorId::PncMode2,
    AllocatorId::Superposition, AllocatorId::Mac, AllocatorId::Codeword};

std::string_view to_string(AllocatorId id) noexcept;

/// Arguments in the allocator's own order:
///   P2p, PncMode2    beta = {beta},            gain = {g}
///   PncUplink        beta = {beta1},           gain = {g_1r, g_2r}
///   Superposition    beta = {beta_p, beta_c},  gain = {g_a, g_b}
///   Mac              beta = {beta_s, beta_w},  gain = {g_s, g_w}, g_s > g_w
///   Codeword         beta = {beta_1, beta_2},  gain = {g_r1, g_r2}
struct OracleInput {
  std::array<double, 2> beta{};
  std::array<double, 2> gain{1.0, 1.0};
};

struct GridSpec {
  int points_per_axis = 200;
  std::vector<double> upper_bounds;  ///< one per axis; empty picks automatic bounds
  int refinements = 4;               ///< zoom passes around the incumbent
};

struct GridResult {
  double value = 0.0;
  std::array<double, 2> point{};  ///< powers or rates, depending on the allocator
};

/// Closed-form allocation for the same input (the thing the grid checks).
ModeAllocation closed_form(AllocatorId id, const OracleInput& in);

/// Axis bounds covering twice the closed-form optimum and the water level.
std::vector<double> auto_bounds(AllocatorId id, const OracleInput& in);

/// Exhaustive minimum of power - sum beta * rate using only forward
/// rate/power relations. Power-space grids for point-to-point, PNC uplink,
/// MAC and codeword modes; rate-space grid for the superposition downlink.
/// One-dimensional problems use points_per_axis^2 points.
GridResult pointwise_grid_min(AllocatorId id, const OracleInput& in, const GridSpec& grid);

struct StaticGridSpec {
  int points_per_axis = 400;
  int refinements = 6;
};

struct StaticGridResult {
  double energy = 0.0;
  std::vector<double> fractions;  ///< active modes in strategy order
};

/// Minimum energy of a strategy on one fixed channel by searching time
/// fractions (summing to one) and inverting each mode's rate formulas.
StaticGridResult static_strategy_grid(Strategy s, const RateRequirement& req,
                                      const ChannelSample& gains, const StaticGridSpec& grid = {});

struct LemmaCheck {
  double e_reference = 0.0;     ///< time sharing (Lemma 3) or codeword downlink (Lemma 4)
  double e_superposed = 0.0;    ///< superposition construction
  bool holds = false;
  int case_index = 0;           ///< Lemma 4 proof case 1..4; 0 for Lemma 3
};

/// Time-shared common + private transmission vs. one superposed transmission
/// over the same total time. Only g_r1 and g_r2 of `s` are used.
LemmaCheck lemma3_check(const ChannelSample& s, double f2, double f3, double r2, double r3);

/// Codeword-superposition downlink vs. the superposition construction picked
/// per proof case (by gain order and rate order).
LemmaCheck lemma4_check(double g_r1, double g_r2, double r61, double r62);

}  // namespace twrn
