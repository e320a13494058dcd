#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace wkbsplit {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// The backward characteristic map is not a contraction for the requested
/// step, or the foot-point iteration did not converge. The step must shrink.
class CharacteristicsDiverged : public Error {
 public:
  explicit CharacteristicsDiverged(const std::string& what) : Error(what) {}
  CharacteristicsDiverged(const std::string& what, std::size_t step, double time)
      : Error(what + " (step " + std::to_string(step) + ", t = " + std::to_string(time) + ")"),
        step_(step),
        time_(time) {}

  std::optional<std::size_t> step() const { return step_; }
  std::optional<double> time() const { return time_; }

 private:
  std::optional<std::size_t> step_;
  std::optional<double> time_;
};

class OverflowRisk : public Error {
 public:
  using Error::Error;
};

class LogDomainError : public Error {
 public:
  using Error::Error;
};

class DegenerateReference : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  /// 1-based line of the offending input, 0 when not tied to a line.
  int line() const { return line_; }

 private:
  int line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class CacheError : public Error {
 public:
  using Error::Error;
};

}  // namespace wkbsplit
