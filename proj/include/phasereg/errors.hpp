#pragma once

#include <stdexcept>
#include <string>

namespace phasereg {

// Invalid arguments, dimension mismatches, empty samples.
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// Bad configuration supplied to a pipeline or scenario runner.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Requested feature outside the supported surface (e.g. moment order != 3).
class UnsupportedError : public std::invalid_argument {
 public:
  explicit UnsupportedError(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical failure: non-finite integrand, singular matrix, overflow.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Empirical characteristic function modulus fell below the safe-division floor.
class DegenerateFrequencyError : public NumericalError {
 public:
  DegenerateFrequencyError(const std::string& what, double t, double modulus)
      : NumericalError(what), t(t), modulus(modulus) {}
  double t;
  double modulus;
};

// Truncation-frequency scan exhausted its grid without crossing the threshold.
class TStarSelectionError : public NumericalError {
 public:
  TStarSelectionError(const std::string& what, double t_max, double min_modulus)
      : NumericalError(what), t_max(t_max), min_modulus(min_modulus) {}
  double t_max;
  double min_modulus;
};

// Optimizer exceeded its iteration budget without meeting the stopping rule.
class NonConvergenceError : public std::runtime_error {
 public:
  explicit NonConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Resampling-based covariance estimation could not produce a usable estimate.
class InferenceFailure : public std::runtime_error {
 public:
  explicit InferenceFailure(const std::string& what) : std::runtime_error(what) {}
};

// Input exceeds a hard cost cap (e.g. the O(n^4) diagnostic path).
class ResourceError : public std::invalid_argument {
 public:
  explicit ResourceError(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed input file; message carries row/column position.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Dataset content violates an operation's requirements (all-missing column, ...).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace phasereg
