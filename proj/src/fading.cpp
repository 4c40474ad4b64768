#include "twrn/fading.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <string>

namespace twrn {

std::string_view to_string(Distribution d) noexcept {
  switch (d) {
    case Distribution::RayleighPowerGain:
      return "rayleigh";
    case Distribution::Static:
      return "static";
  }
  return "?";
}

Distribution parse_distribution(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "rayleigh" || lower == "rayleighpowergain") return Distribution::RayleighPowerGain;
  if (lower == "static") return Distribution::Static;
  throw ConfigError("distribution", "unknown distribution '" + std::string(text) + "'");
}

void FadingSpec::validate() const {
  auto positive = [](const char* field, double v) {
    if (!(std::isfinite(v) && v > 0.0)) throw ConfigError(field, "must be a positive finite number");
  };
  positive("mean_gain_1r", mean_gain_1r);
  positive("mean_gain_2r", mean_gain_2r);
  positive("mean_gain_r1", mean_gain_r1);
  positive("mean_gain_r2", mean_gain_r2);
  if (n_samples < 1) throw ConfigError("n_samples", "must be at least 1");
  if (distribution == Distribution::Static && n_samples != 1)
    throw ConfigError("n_samples", "static distribution requires exactly one sample");
}

FadingSpec FadingSpec::swapped() const {
  FadingSpec s = *this;
  std::swap(s.mean_gain_1r, s.mean_gain_2r);
  std::swap(s.mean_gain_r1, s.mean_gain_r2);
  return s;
}

SampleSet::SampleSet(FadingSpec spec, std::vector<ChannelSample> samples)
    : spec_(spec), samples_(std::move(samples)) {
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto& s = samples_[i];
    for (double g : {s.g_1r, s.g_2r, s.g_r1, s.g_r2})
      if (!(std::isfinite(g) && g > 0.0))
        throw NumericalError("channel gain must be positive and finite", i, s);
  }
}

SampleSet SampleSet::swapped() const {
  std::vector<ChannelSample> out;
  out.reserve(samples_.size());
  for (const auto& s : samples_) out.push_back(s.swapped());
  return SampleSet(spec_.swapped(), std::move(out));
}

namespace {

// Uniform on [0, 1) with 53 random bits; fixed mapping so draws do not depend
// on the standard library's distribution implementations.
double unit_uniform(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

double exponential(std::mt19937_64& engine, double mean) {
  for (;;) {
    const double g = -mean * std::log1p(-unit_uniform(engine));
    if (g > 0.0 && std::isfinite(g)) return g;
  }
}

}  // namespace

SampleSet sample_channels(const FadingSpec& spec) {
  spec.validate();
  std::vector<ChannelSample> samples;
  samples.reserve(spec.n_samples);
  if (spec.distribution == Distribution::Static) {
    samples.push_back({spec.mean_gain_1r, spec.mean_gain_2r, spec.mean_gain_r1, spec.mean_gain_r2});
  } else {
    std::mt19937_64 engine(spec.seed);
    for (std::size_t i = 0; i < spec.n_samples; ++i) {
      ChannelSample s;
      s.g_1r = exponential(engine, spec.mean_gain_1r);
      s.g_2r = exponential(engine, spec.mean_gain_2r);
      s.g_r1 = exponential(engine, spec.mean_gain_r1);
      s.g_r2 = exponential(engine, spec.mean_gain_r2);
      samples.push_back(s);
    }
  }
  return SampleSet(spec, std::move(samples));
}

}  // namespace twrn
