#pragma once

#include <stdexcept>
#include <string>

namespace hhc {

// Error classes map one-to-one onto the CLI exit codes; every failure in the
// pipeline is reported through one of these.

/// Malformed or invalid input data (CSV syntax, bad values, unknown ids).
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A covariate join could not be satisfied (missing observation, unknown key).
class JoinError : public std::runtime_error {
 public:
  explicit JoinError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Statistical inference is undefined for the given data (no residual degrees
/// of freedom, singular unregularized system).
class InferenceError : public std::runtime_error {
 public:
  explicit InferenceError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid run configuration (bad fold count, missing table, infeasible spec).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;  // anything not classified below
inline constexpr int input = 2;
inline constexpr int join = 3;
inline constexpr int inference = 4;
inline constexpr int config = 5;
}  // namespace exit_code

}  // namespace hhc
