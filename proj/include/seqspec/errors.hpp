#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace seqspec {

enum class ErrorKind {
  usage,
  precondition,
  singular_matrix,
  numerical_failure,
  divergence,
  unbounded_trajectory,
};

const char* to_string(ErrorKind kind) noexcept;

/// Process exit status used by the command line front end for each error kind.
int exit_code(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorKind::usage, what) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(ErrorKind::precondition, what) {}
};

class SingularMatrixError : public Error {
 public:
  SingularMatrixError(const std::string& what, std::size_t pivot_row, double pivot_magnitude)
      : Error(ErrorKind::singular_matrix, what), pivot_row_(pivot_row), pivot_magnitude_(pivot_magnitude) {}
  std::size_t pivot_row() const noexcept { return pivot_row_; }
  double pivot_magnitude() const noexcept { return pivot_magnitude_; }

 private:
  std::size_t pivot_row_;
  double pivot_magnitude_;
};

/// Iteration did not meet its stopping rule. `residuals` carries whatever the
/// failing routine considers its last iterate (per-root residuals, Rayleigh
/// quotient history, ...).
class NumericalFailure : public Error {
 public:
  NumericalFailure(const std::string& what, std::vector<double> residuals)
      : Error(ErrorKind::numerical_failure, what), residuals_(std::move(residuals)) {}
  const std::vector<double>& residuals() const noexcept { return residuals_; }

 private:
  std::vector<double> residuals_;
};

class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::vector<double> last_term_norms)
      : Error(ErrorKind::divergence, what), last_term_norms_(std::move(last_term_norms)) {}
  const std::vector<double>& last_term_norms() const noexcept { return last_term_norms_; }

 private:
  std::vector<double> last_term_norms_;
};

class UnboundedTrajectory : public Error {
 public:
  UnboundedTrajectory(const std::string& what, std::size_t index)
      : Error(ErrorKind::unbounded_trajectory, what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace seqspec
