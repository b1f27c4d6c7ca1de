#pragma once

#include <stdexcept>
#include <string>

namespace subharm {

/// A precondition on numeric arguments was violated (r > R, r < 1, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The instance itself is unusable: +inf - inf at a point, a weight that
/// is negative, a kernel that is not even/decreasing, and similar.
class DegenerateInstance : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Adaptive quadrature ran out of panels before reaching its tolerance.
class QuadratureFailure : public std::runtime_error {
 public:
  QuadratureFailure(const std::string& what, double best, double error)
      : std::runtime_error(what), best_(best), error_(error) {}

  double best_estimate() const { return best_; }
  double error_estimate() const { return error_; }

 private:
  double best_;
  double error_;
};

class GenerationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace subharm
