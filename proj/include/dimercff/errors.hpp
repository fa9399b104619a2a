#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dimercff {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Graph cannot carry a perfect matching (odd vertex count, color imbalance).
struct UnmatchableGraphError : Error {
  using Error::Error;
};

// Invalid construction parameters (degenerate ranges, bad holes, missing faces).
struct ConstructionError : Error {
  using Error::Error;
};

// Kasteleyn matrix is not square (unbalanced color classes).
struct RectangularMatrixError : Error {
  using Error::Error;
};

// det K = 0 where an inverse entry was requested.
struct SingularSystemError : Error {
  using Error::Error;
};

// A quantity violated a structural bound (e.g. edge probability outside [0,1]).
struct InconsistencyError : Error {
  using Error::Error;
};

// Enumeration exceeded its configured limit; carries the partial count.
struct EnumerationLimitError : Error {
  std::uint64_t count_so_far;
  EnumerationLimitError(const std::string& what, std::uint64_t count)
      : Error(what), count_so_far(count) {}
};

// Twisted expectation with vanishing denominator.
struct DegenerateTwistError : Error {
  using Error::Error;
};

// No theta characteristic reproduces the requested monodromy pattern.
struct ConventionMismatchError : Error {
  using Error::Error;
};

// Kernel evaluated at (or too close to) a pole.
struct PoleError : Error {
  using Error::Error;
};

// Bad experiment / CLI configuration.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace dimercff
