#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ccwind {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter violates its documented domain (non-positive scale length,
/// gamma <= 0, k larger than the data set, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

class ScheduleError : public Error {
 public:
  using Error::Error;
};

class SimulationDiverged : public Error {
 public:
  SimulationDiverged(std::size_t step, const std::string& what)
      : Error("simulation diverged at step " + std::to_string(step) + ": " + what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// A score that is undefined for the given input, e.g. a silhouette over a
/// single cluster.
class UndefinedScore : public Error {
 public:
  using Error::Error;
};

class OutOfHorizon : public Error {
 public:
  using Error::Error;
};

/// Invalid or missing configuration field. `field` is the dotted JSON path.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& why)
      : Error(field + ": " + why), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace ccwind
