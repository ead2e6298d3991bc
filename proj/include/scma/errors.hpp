#pragma once

#include <stdexcept>
#include <string>

namespace scma {

// Index outside its one-based domain.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Invalid parameter or configuration value.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input that is structurally valid but degenerate (all-zero collection, k == l, ...).
class DegenerateInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Instance too large for exhaustive enumeration or dense storage.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Codebook / schedule file violating its schema. `path` is a JSON pointer.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

// Internal numerical failure of a solver (factorization breakdown and the like).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace scma
