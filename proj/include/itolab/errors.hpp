#ifndef ITOLAB_ERRORS_HPP
#define ITOLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace itolab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments: bad exponents, shape or kind mismatch, non-finite data.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// An exact computation would exceed its atom budget; callers fall back to sampling.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// The sum-norm optimizer hit its iteration cap before meeting the tolerance.
class OptimizerError : public Error {
 public:
  OptimizerError(const std::string& what, double best_value)
      : Error(what), best_value_(best_value) {}
  double best_value() const noexcept { return best_value_; }

 private:
  double best_value_;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidInput(message);
}

}  // namespace itolab

#endif
