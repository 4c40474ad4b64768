#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

#include "twrn/channel.hpp"

namespace twrn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user-supplied configuration. `field()` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + field + ": " + what
                       : field + ": " + what),
        field_(std::move(field)),
        line_(line) {}

  const std::string& field() const noexcept { return field_; }
  int line() const noexcept { return line_; }

 private:
  std::string field_;
  int line_;
};

/// A non-finite value showed up where a finite one is required.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(what) {}
  NumericalError(const std::string& what, std::size_t index, const ChannelSample& sample)
      : Error(what + " at sample " + std::to_string(index)), index_(index), sample_(sample) {}

  std::optional<std::size_t> index() const noexcept { return index_; }
  std::optional<ChannelSample> sample() const noexcept { return sample_; }

 private:
  std::optional<std::size_t> index_;
  std::optional<ChannelSample> sample_;
};

/// Caller broke a documented precondition (negative rate, etc.).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// A rate target could not be reached with multipliers up to the bracket limit.
class BracketError : public Error {
 public:
  BracketError(const std::string& what, double achieved, double target)
      : Error(what + ": achieved " + std::to_string(achieved) + " at bracket edge, target " +
              std::to_string(target)),
        achieved_(achieved),
        target_(target) {}

  double achieved() const noexcept { return achieved_; }
  double target() const noexcept { return target_; }

 private:
  double achieved_;
  double target_;
};

/// A quantity assumed monotone along a bracketing search moved the wrong way.
class MonotonicityError : public Error {
 public:
  using Error::Error;
};

/// The outer time-fraction search failed to close the time budget.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, double closest_sum)
      : Error(what + " (closest sum of fractions " + std::to_string(closest_sum) + ")"),
        closest_sum_(closest_sum) {}

  double closest_sum() const noexcept { return closest_sum_; }

 private:
  double closest_sum_;
};

}  // namespace twrn

namespace twrn {

/// A strategy solve failed; wraps the underlying error message.
class StrategyError : public Error {
 public:
  StrategyError(std::string strategy, const std::string& what)
      : Error(strategy + ": " + what), strategy_(std::move(strategy)) {}

  const std::string& strategy() const noexcept { return strategy_; }

 private:
  std::string strategy_;
};

}  // namespace twrn
