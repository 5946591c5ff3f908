#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rankone {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Wrong support kind, argument outside the admissible domain, malformed input.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Evaluation at (or numerically at) a singularity: an atom of the measure,
/// a zero of 1 + alpha*F, a vanishing perturbation scalar, ...
class PoleError : public Error {
 public:
  using Error::Error;
};

/// A matrix that must be invertible (or injective) is numerically singular.
class SingularOperatorError : public Error {
 public:
  using Error::Error;
};

/// A limiting procedure failed to stabilize. Carries the offending evaluation
/// points so callers can report partial results.
class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& what,
                            std::vector<std::size_t> points = {})
      : Error(what), points_(std::move(points)) {}
  const std::vector<std::size_t>& points() const { return points_; }

 private:
  std::vector<std::size_t> points_;
};

/// Malformed experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace rankone
