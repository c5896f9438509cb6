#pragma once

#include <stdexcept>
#include <string>

namespace dpboot {

// Invalid argument values (out-of-range parameters, malformed configs).
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// A requested target cannot be met within the admissible range, e.g. a
// delta larger than delta(0, mu) when solving for epsilon.
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

// Iterative solver exhausted its budget before reaching tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input data (bad labels, dimension mismatches, unusable curves).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// File level ingestion problems: unreadable paths, non-numeric cells,
// empty results after filtering.
class IngestError : public std::runtime_error {
 public:
  explicit IngestError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dpboot
