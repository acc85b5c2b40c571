#pragma once

#include <stdexcept>
#include <string>

namespace flucto {

// Raised when a computation has no finite answer for the requested input,
// e.g. a quadrature whose integrand is not integrable.
class NonIntegrable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RegimeUnavailable : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class UnsupportedState : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class GridTooCoarse : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown only when a caller explicitly requires a convergent prediction.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& condition, double margin)
      : std::runtime_error("convergence condition violated: " + condition),
        condition_(condition),
        margin_(margin) {}

  const std::string& condition() const noexcept { return condition_; }
  double margin() const noexcept { return margin_; }

 private:
  std::string condition_;
  double margin_;
};

}  // namespace flucto
