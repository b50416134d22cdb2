#pragma once

#include <stdexcept>
#include <string>

namespace skoda {

/// Operand dimensions do not agree.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A stated hypothesis of an operation (e.g. gamma >= q) is violated.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// All generators vanish at the evaluation point, so |g|^2 = 0 and any
/// quantity divided by it is undefined.
class SingularityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// f is not in the degree-d truncation of the ideal (g_1, ..., g_p).
class InfeasibleDivision : public std::runtime_error {
 public:
  InfeasibleDivision(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// The finiteness hypothesis of the division theorem fails (a weighted
/// integral diverges), so no bound can be asserted.
class HypothesisFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace skoda
