#pragma once

#include <stdexcept>
#include <string>

namespace edasim {

// Bad parameter values, malformed configs, violated preconditions.
// The message names the offending field where one exists.
struct ConfigError : std::invalid_argument {
  explicit ConfigError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Structural validation failures (ladder coverage, event-log nesting, ...).
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// resolution_at / reconstruction requested at a rail-clamped operating point.
struct SaturatedOperatingPoint : std::domain_error {
  explicit SaturatedOperatingPoint(const std::string& msg) : std::domain_error(msg) {}
};

// An ADC code at either extreme carries no usable voltage information.
struct SaturatedCode : std::domain_error {
  explicit SaturatedCode(const std::string& msg) : std::domain_error(msg) {}
};

// gain_ratio between settings with different divider resistors depends on the
// operating point and has no single value.
struct OperatingPointDependentRatio : std::domain_error {
  explicit OperatingPointDependentRatio(const std::string& msg) : std::domain_error(msg) {}
};

// Pearson correlation of a constant series is undefined.
struct ZeroVariance : std::domain_error {
  explicit ZeroVariance(const std::string& msg) : std::domain_error(msg) {}
};

}  // namespace edasim
