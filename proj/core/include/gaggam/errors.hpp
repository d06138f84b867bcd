#ifndef GAGGAM_ERRORS_HPP_
#define GAGGAM_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace gaggam {

// Raised for malformed or unusable input data (missing files, parse
// failures, degenerate splits, zero-variance columns).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a model cannot be fitted (singular system, unbuildable
// basis).  The evolutionary layer converts this into worst-case
// objectives instead of propagating it.
class FitFailure : public std::runtime_error {
 public:
  explicit FitFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gaggam

#endif  // GAGGAM_ERRORS_HPP_
