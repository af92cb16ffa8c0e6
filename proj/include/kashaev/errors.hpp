#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace kashaev {

/// Malformed or inconsistent tangle diagram (width bookkeeping, orientation, components).
class DiagramError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation refused because its size exceeds a configured bound.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Point outside the domain of a special function or a degenerate shape.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Iterative solver failure; carries the residual history for diagnosis.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}

  const std::vector<double>& trace() const { return trace_; }

 private:
  std::vector<double> trace_;
};

}  // namespace kashaev
