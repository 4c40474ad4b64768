#include "twrn/exact_sum.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace twrn {
namespace {

__extension__ typedef unsigned __int128 uint128;

constexpr std::int64_t kDigitMask = (std::int64_t{1} << 32) - 1;
constexpr int kMinExponent = -1074;

// Propagates carries so that every limb but the last lies in [0, 2^32).
template <std::size_t N>
void propagate(std::array<std::int64_t, N>& limbs) {
  for (std::size_t i = 0; i + 1 < N; ++i) {
    const std::int64_t carry = limbs[i] >> 32;  // arithmetic shift floors
    limbs[i] -= carry * (std::int64_t{1} << 32);
    limbs[i + 1] += carry;
  }
}

}  // namespace

void ExactSum::add(double x) {
  if (!std::isfinite(x)) throw std::domain_error("ExactSum::add: non-finite value");
  ++count_;
  if (x == 0.0) return;

  const auto bits = std::bit_cast<std::uint64_t>(x);
  const bool negative = (bits >> 63) != 0;
  const int biased = static_cast<int>((bits >> 52) & 0x7FF);
  std::uint64_t mantissa = bits & ((std::uint64_t{1} << 52) - 1);
  int exponent = kMinExponent;
  if (biased != 0) {
    mantissa |= std::uint64_t{1} << 52;
    exponent = biased - 1075;
  }
  const int position = exponent - kMinExponent;
  const int limb = position / kDigitBits;
  const int shift = position % kDigitBits;
  const uint128 wide = static_cast<uint128>(mantissa) << shift;

  for (int k = 0; k < 3; ++k) {
    const auto digit = static_cast<std::int64_t>((wide >> (32 * k)) & 0xFFFFFFFFu);
    if (negative)
      limbs_[limb + k] -= digit;
    else
      limbs_[limb + k] += digit;
  }
  if (++pending_ >= (std::uint64_t{1} << 29)) normalize();
}

ExactSum& ExactSum::operator+=(const ExactSum& other) {
  normalize();
  ExactSum rhs = other;
  rhs.normalize();
  for (int i = 0; i < kLimbs; ++i) limbs_[i] += rhs.limbs_[i];
  count_ += other.count_;
  normalize();
  return *this;
}

void ExactSum::normalize() {
  propagate(limbs_);
  pending_ = 0;
}

double ExactSum::value() const {
  auto limbs = limbs_;
  propagate(limbs);

  bool negative = false;
  if (limbs[kLimbs - 1] < 0) {
    negative = true;
    for (auto& l : limbs) l = -l;
    propagate(limbs);
  }

  int top = kLimbs - 1;
  while (top >= 0 && limbs[top] == 0) --top;
  if (top < 0) return 0.0;

  const auto top_digit = static_cast<std::uint64_t>(limbs[top]);
  const int msb = kDigitBits * top + (63 - std::countl_zero(top_digit));

  double magnitude;
  if (msb < 53) {
    // Below 2^53 units of 2^-1074 everything is exactly representable.
    std::uint64_t v = 0;
    for (int i = top; i >= 0; --i) v = (v << 32) | static_cast<std::uint64_t>(limbs[i] & kDigitMask);
    magnitude = std::ldexp(static_cast<double>(v), kMinExponent);
  } else {
    // Gather 96 bits from the three highest limbs, then align the msb to bit 63.
    uint128 window = 0;
    int low_limb = top;
    for (int k = 0; k < 3 && low_limb >= 0; ++k, --low_limb)
      window = (window << 32) | static_cast<std::uint64_t>(limbs[low_limb]);
    ++low_limb;  // lowest limb included in the window
    const int window_low_bit = kDigitBits * low_limb;
    const int drop = (msb - 63) - window_low_bit;  // bits of the window below the 64-bit head
    std::uint64_t head;
    bool sticky = false;
    if (drop >= 0) {
      head = static_cast<std::uint64_t>(window >> drop);
      if (drop > 0) sticky = (window & ((static_cast<uint128>(1) << drop) - 1)) != 0;
    } else {
      head = static_cast<std::uint64_t>(window << (-drop));
    }
    for (int i = low_limb - 1; i >= 0 && !sticky; --i) sticky = limbs[i] != 0;

    std::uint64_t mant = head >> 11;
    const std::uint64_t rest = head & 0x7FF;
    constexpr std::uint64_t half = 0x400;
    if (rest > half || (rest == half && (sticky || (mant & 1u)))) ++mant;
    int exponent = msb - 52 + kMinExponent;
    if (mant == (std::uint64_t{1} << 53)) {
      mant >>= 1;
      ++exponent;
    }
    magnitude = std::ldexp(static_cast<double>(mant), exponent);
  }
  return negative ? -magnitude : magnitude;
}

}  // namespace twrn
