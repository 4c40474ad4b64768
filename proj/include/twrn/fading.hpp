#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <thread>
#include <vector>

#include "twrn/channel.hpp"
#include "twrn/errors.hpp"
#include "twrn/exact_sum.hpp"

namespace twrn {

enum class Distribution {
  RayleighPowerGain,  ///< each power gain ~ Exp(mean): power of a Rayleigh amplitude
  Static,             ///< a single sample equal to the means
};

std::string_view to_string(Distribution d) noexcept;
Distribution parse_distribution(std::string_view text);  // throws ConfigError

struct FadingSpec {
  double mean_gain_1r = 1.0;
  double mean_gain_2r = 1.0;
  double mean_gain_r1 = 1.0;
  double mean_gain_r2 = 1.0;
  std::size_t n_samples = 1;
  std::uint64_t seed = 0;
  Distribution distribution = Distribution::RayleighPowerGain;

  /// Throws ConfigError naming the first offending field.
  void validate() const;

  /// Spec with the roles of S1 and S2 exchanged.
  FadingSpec swapped() const;
};

/// Immutable, ordered set of channel samples drawn from one FadingSpec.
/// Safe to share between threads.
class SampleSet {
 public:
  /// Wraps explicit samples (every gain must be strictly positive and finite).
  SampleSet(FadingSpec spec, std::vector<ChannelSample> samples);

  const FadingSpec& spec() const noexcept { return spec_; }
  std::span<const ChannelSample> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  const ChannelSample& operator[](std::size_t i) const noexcept { return samples_[i]; }

  /// Same draws with S1 and S2 exchanged in every sample.
  SampleSet swapped() const;

 private:
  FadingSpec spec_;
  std::vector<ChannelSample> samples_;
};

/// Draws samples per `spec`. Deterministic in (seed, n_samples, means, distribution).
SampleSet sample_channels(const FadingSpec& spec);

struct ExpectOptions {
  unsigned threads = 1;
  std::size_t chunk = 4096;
};

/// Sample means of N per-sample quantities in one pass.
///
/// Sums are exact (ExactSum), so results are bitwise identical for any
/// permutation of the samples, chunk size or thread count. A non-finite
/// value aborts with NumericalError carrying the offending sample.
template <std::size_t N, class Fn>
std::array<double, N> expect_n(const SampleSet& set, Fn&& fn, ExpectOptions options = {}) {
  const auto samples = set.samples();
  const std::size_t n = samples.size();
  const std::size_t chunk = options.chunk == 0 ? n : options.chunk;
  const std::size_t n_chunks = n == 0 ? 0 : (n + chunk - 1) / chunk;

  auto run_chunk = [&](std::size_t c, std::array<ExactSum, N>& acc) {
    const std::size_t end = std::min(n, (c + 1) * chunk);
    for (std::size_t i = c * chunk; i < end; ++i) {
      const std::array<double, N> v = fn(samples[i]);
      for (std::size_t k = 0; k < N; ++k) {
        if (!std::isfinite(v[k]))
          throw NumericalError("expectation integrand is not finite", i, samples[i]);
        acc[k].add(v[k]);
      }
    }
  };

  std::array<ExactSum, N> total{};
  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, n_chunks));
  if (threads <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) run_chunk(c, total);
  } else {
    std::vector<std::array<ExactSum, N>> partial(threads);
    std::vector<std::exception_ptr> errors(threads);
    {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
          try {
            for (std::size_t c = t; c < n_chunks; c += threads) run_chunk(c, partial[t]);
          } catch (...) {
            errors[t] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    for (auto& p : partial)
      for (std::size_t k = 0; k < N; ++k) total[k] += p[k];
  }

  std::array<double, N> mean{};
  for (std::size_t k = 0; k < N; ++k) mean[k] = n == 0 ? 0.0 : total[k].value() / static_cast<double>(n);
  return mean;
}

/// Sample mean of a real-valued per-sample function.
template <class Fn>
double expect(const SampleSet& set, Fn&& fn, ExpectOptions options = {}) {
  return expect_n<1>(set, [&](const ChannelSample& s) { return std::array<double, 1>{fn(s)}; },
                     options)[0];
}

}  // namespace twrn
