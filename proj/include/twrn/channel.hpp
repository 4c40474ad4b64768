#pragma once

namespace twrn {

/// Instantaneous power gains of the four links for one fading block.
/// Noise is unit variance, so received SNR is simply power * gain.
struct ChannelSample {
  double g_1r = 1.0;  ///< S1 -> relay
  double g_2r = 1.0;  ///< S2 -> relay
  double g_r1 = 1.0;  ///< relay -> S1
  double g_r2 = 1.0;  ///< relay -> S2

  /// Exchange the roles of S1 and S2.
  constexpr ChannelSample swapped() const noexcept { return {g_2r, g_1r, g_r2, g_r1}; }

  friend constexpr bool operator==(const ChannelSample&, const ChannelSample&) = default;
};

}  // namespace twrn
