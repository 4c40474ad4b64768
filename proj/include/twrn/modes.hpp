#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string_view>

#include "twrn/alloc.hpp"
#include "twrn/fading.hpp"

namespace twrn {

struct SolverConfig {
  double eps_inner = 1e-6;
  double eps_outer = 1e-3;
  int max_iter = 200;
  double bracket_max = 1e6;
  unsigned threads = 1;  ///< worker threads for sample averages

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Transmission modes, each a pointwise allocator over a channel sample.
///
/// Two-stream modes order their streams so that stream 0 carries the
/// smaller source's bits after canonicalization (lambda1 <= lambda2):
///   MacUplink             {R from S1, R from S2}
///   SuperposedDownlink    {common to both, private to S1}
///   CodewordDownlink      {to S2 over g_r2, to S1 over g_r1}
enum class ModeKind {
  PncUplink,
  UplinkFromS2,
  CommonBroadcast,
  DownlinkToS1,
  MacUplink,
  SuperposedDownlink,
  CodewordDownlink,
};

std::string_view to_string(ModeKind kind) noexcept;
int stream_count(ModeKind kind) noexcept;

/// Evaluates a mode at one sample with multipliers for its streams.
/// Always returns power and rate in stream order.
ModeAllocation allocate(ModeKind kind, const std::array<double, 2>& beta, const ChannelSample& s);

/// Sample averages of a mode at fixed multipliers, or a convex mix of two
/// such (time-sharing inside the mode), which keeps every field linear.
struct ModeAverages {
  std::array<double, 2> beta{};
  std::array<double, 2> rate{};
  double power = 0.0;
  double dual = 0.0;  ///< power - sum beta * rate, averaged

  static ModeAverages mix(const ModeAverages& lo, const ModeAverages& hi, double theta);
};

ModeAverages evaluate_mode(ModeKind kind, const std::array<double, 2>& beta, const SampleSet& set,
                           unsigned threads = 1);

/// Result of a bracketed monotone root search.
struct RootResult {
  double x = 0.0;
  ModeAverages at;
  int evaluations = 0;
  bool mixed = false;  ///< bracket collapsed on a jump; `at` interpolates its ends
};

/// Finds x in [0, bracket_max] with |residual(at(x))| <= tol, where the
/// residual is nondecreasing in x and linear in the averages. Starts near
/// `guess`. When the residual jumps across zero, returns the mix of the two
/// bracket ends that zeroes it. Throws BracketError if the residual stays
/// negative up to bracket_max and MonotonicityError if it decreases by more
/// than `tol` along the search.
RootResult find_monotone_root(const std::function<ModeAverages(double)>& at,
                              const std::function<double(const ModeAverages&)>& residual,
                              double guess, double tol, const SolverConfig& cfg,
                              std::string_view what);

struct DualSolution {
  ModeAverages avg;
  int evaluations = 0;
};

/// Multipliers giving average rates equal to `targets` (zero targets keep a
/// zero multiplier). Two-stream modes: inner search on stream 1 keeps the
/// rate ratio, outer search on stream 0 meets the target.
DualSolution mode_dual_solve(ModeKind kind, const std::array<double, 2>& targets,
                             const SampleSet& set, const SolverConfig& cfg,
                             std::optional<std::array<double, 2>> hint = std::nullopt);

/// Multipliers whose dual value equals `gamma` (< 0) while the stream rates
/// stay in proportion to `bits`.
DualSolution mode_equalize(ModeKind kind, const std::array<double, 2>& bits, double gamma,
                           const SampleSet& set, const SolverConfig& cfg,
                           std::optional<std::array<double, 2>> hint = std::nullopt);

}  // namespace twrn
