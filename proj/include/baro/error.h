#ifndef BARO_ERROR_H_
#define BARO_ERROR_H_

#include <stdexcept>
#include <string>

namespace baro {

// Raised when a parameter violates an operation's precondition.
class InvalidParameter : public std::invalid_argument {
 public:
  explicit InvalidParameter(const std::string& what)
      : std::invalid_argument(what) {}
};

// Raised by exact solvers when the instance is larger than they accept.
class SizeLimitExceeded : public std::length_error {
 public:
  explicit SizeLimitExceeded(const std::string& what)
      : std::length_error(what) {}
};

// Raised when a numeric routine fails to converge.
class NumericFailure : public std::runtime_error {
 public:
  explicit NumericFailure(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace baro

#endif  // BARO_ERROR_H_
