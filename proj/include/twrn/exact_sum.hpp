#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace twrn {

/// Exact accumulator for IEEE doubles.
///
/// Every finite double is an integer multiple of 2^-1074, so the running sum
/// is kept as a wide fixed-point integer split across 32-bit digits held in
/// signed 64-bit limbs. Additions are exact, which makes `value()` the
/// correctly rounded sum independent of the order of `add` calls and of how
/// partial accumulators are merged.
class ExactSum {
 public:
  ExactSum() = default;

  /// Adds a finite value. Non-finite input is a precondition violation and
  /// is rejected with std::domain_error.
  void add(double x);

  ExactSum& operator+=(const ExactSum& other);

  /// Correctly rounded (nearest, ties to even) value of the exact sum.
  double value() const;

  std::size_t count() const noexcept { return count_; }

 private:
  static constexpr int kDigitBits = 32;
  static constexpr int kLimbs = 70;

  void normalize();

  std::array<std::int64_t, kLimbs> limbs_{};
  std::size_t count_ = 0;
  std::uint64_t pending_ = 0;  // adds since the last carry propagation
};

}  // namespace twrn
