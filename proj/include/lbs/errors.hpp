#pragma once

#include <stdexcept>
#include <string>

namespace lbs {

// Error categories mapped to CLI exit codes: validation -> 2,
// convergence -> 3, I/O -> 4.

struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

struct ConvergenceError : std::runtime_error {
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
  IoError(const std::string& what, long row = -1, long column = -1)
      : std::runtime_error(what), row(row), column(column) {}
  long row;
  long column;
};

}  // namespace lbs
