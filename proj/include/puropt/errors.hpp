#pragma once

#include <stdexcept>
#include <string>

namespace puropt {

// Coarse categories that the CLI maps to process exit codes.
enum class ErrorCategory { Infeasible = 2, Validation = 3, Disagreement = 4 };

class Error : public std::runtime_error {
public:
  Error(ErrorCategory category, const std::string& msg)
      : std::runtime_error(msg), category_(category) {}
  ErrorCategory category() const noexcept { return category_; }

private:
  ErrorCategory category_;
};

// The purity budget t is below 1/n, so P(t) is empty.
class InfeasibleError : public Error {
public:
  InfeasibleError(double t, double t_min)
      : Error(ErrorCategory::Infeasible,
              "infeasible: purity budget t=" + std::to_string(t) +
                  " is below 1/n=" + std::to_string(t_min)),
        t_(t), t_min_(t_min) {}
  double t() const noexcept { return t_; }
  double t_min() const noexcept { return t_min_; }

private:
  double t_;
  double t_min_;
};

class ValidationError : public Error {
public:
  explicit ValidationError(const std::string& msg)
      : Error(ErrorCategory::Validation, msg) {}
};

class DimensionMismatchError : public ValidationError {
public:
  explicit DimensionMismatchError(const std::string& msg) : ValidationError(msg) {}
};

class DimensionTooLargeError : public ValidationError {
public:
  explicit DimensionTooLargeError(const std::string& msg) : ValidationError(msg) {}
};

// Raised by the push operations when the objective is proportional to 1.
class UniformObjectiveError : public ValidationError {
public:
  UniformObjectiveError() : ValidationError("objective is uniform: push direction undefined") {}
};

class NonHermitianInputError : public ValidationError {
public:
  explicit NonHermitianInputError(const std::string& msg) : ValidationError(msg) {}
};

class NotPureTargetError : public ValidationError {
public:
  explicit NotPureTargetError(const std::string& msg) : ValidationError(msg) {}
};

class NotTracePreservingError : public ValidationError {
public:
  explicit NotTracePreservingError(const std::string& msg) : ValidationError(msg) {}
};

class SingularBasisError : public ValidationError {
public:
  explicit SingularBasisError(const std::string& msg) : ValidationError(msg) {}
};

class OutOfWindowError : public ValidationError {
public:
  explicit OutOfWindowError(const std::string& msg) : ValidationError(msg) {}
};

class DegenerateDesignError : public ValidationError {
public:
  explicit DegenerateDesignError(const std::string& msg) : ValidationError(msg) {}
};

// KKT reconstruction produced an infeasible vector; signals that the scalar
// minimization did not converge tightly enough.
class InternalKKTViolationError : public Error {
public:
  explicit InternalKKTViolationError(const std::string& msg)
      : Error(ErrorCategory::Validation, msg) {}
};

class SolverDisagreementError : public Error {
public:
  explicit SolverDisagreementError(const std::string& msg)
      : Error(ErrorCategory::Disagreement, msg) {}
};

}  // namespace puropt
