#include "seqspec/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "seqspec/errors.hpp"

namespace seqspec {

bool is_finite(Complex z) noexcept { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

namespace {

void require_finite(std::span<const Complex> values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!is_finite(values[i])) throw PreconditionError(std::string(what) + ": non-finite entry at index " + std::to_string(i));
  }
}

void require_dim(std::size_t dim) {
  if (dim < 1 || dim > kMaxDim) throw PreconditionError("matrix dimension " + std::to_string(dim) + " outside [1, 64]");
}

}  // namespace

CVector::CVector(std::size_t dim) : entries_(dim) {}

CVector::CVector(std::vector<Complex> entries) : entries_(std::move(entries)) { require_finite(entries_, "vector"); }

CVector::CVector(std::initializer_list<Complex> entries) : entries_(entries) { require_finite(entries_, "vector"); }

double CVector::norm() const noexcept {
  // Scaled to survive entries near the overflow threshold.
  double scale = 0.0;
  for (const Complex& z : entries_) scale = std::max(scale, std::max(std::abs(z.real()), std::abs(z.imag())));
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (const Complex& z : entries_) {
    const double re = z.real() / scale;
    const double im = z.imag() / scale;
    sum += re * re + im * im;
  }
  return scale * std::sqrt(sum);
}

CVector& CVector::operator+=(const CVector& other) {
  if (other.dim() != dim()) throw PreconditionError("vector dimension mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

CVector& CVector::operator-=(const CVector& other) {
  if (other.dim() != dim()) throw PreconditionError("vector dimension mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

CVector& CVector::operator*=(Complex s) noexcept {
  for (Complex& z : entries_) z *= s;
  return *this;
}

CMatrix::CMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) { require_dim(dim); }

CMatrix::CMatrix(std::size_t dim, std::vector<Complex> entries) : dim_(dim), entries_(std::move(entries)) {
  require_dim(dim);
  if (entries_.size() != dim * dim) {
    throw PreconditionError("matrix of dimension " + std::to_string(dim) + " needs " + std::to_string(dim * dim) +
                            " entries, got " + std::to_string(entries_.size()));
  }
  require_finite(entries_, "matrix");
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows) : dim_(rows.size()) {
  require_dim(dim_);
  entries_.reserve(dim_ * dim_);
  for (const auto& row : rows) {
    if (row.size() != dim_) throw PreconditionError("matrix rows must all have length " + std::to_string(dim_));
    entries_.insert(entries_.end(), row.begin(), row.end());
  }
  require_finite(entries_, "matrix");
}

CMatrix CMatrix::identity(std::size_t dim) {
  CMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const Complex> diag) {
  CMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  require_finite(m.entries_, "matrix");
  return m;
}

CMatrix CMatrix::diagonal(std::initializer_list<Complex> diag) {
  return diagonal(std::span<const Complex>(diag.begin(), diag.size()));
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

Complex CMatrix::trace() const noexcept {
  Complex t{};
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double CMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (const Complex& z : entries_) m = std::max(m, std::abs(z));
  return m;
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
  if (other.dim_ != dim_) throw PreconditionError("matrix dimension mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
  if (other.dim_ != dim_) throw PreconditionError("matrix dimension mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

CMatrix& CMatrix::operator*=(Complex s) noexcept {
  for (Complex& z : entries_) z *= s;
  return *this;
}

CMatrix& CMatrix::add_identity(Complex s) noexcept {
  for (std::size_t i = 0; i < dim_; ++i) entries_[i * dim_ + i] += s;
  return *this;
}

LogMagnitude LogMagnitude::of(double magnitude) {
  if (!(magnitude >= 0.0)) throw PreconditionError("LogMagnitude::of needs a non-negative magnitude");
  if (magnitude == 0.0) return zero();
  return from_log(std::log(magnitude));
}

double LogMagnitude::log() const {
  if (zero_) throw PreconditionError("logarithm of an exactly-zero magnitude requested");
  return log_;
}

double LogMagnitude::value() const noexcept { return zero_ ? 0.0 : std::exp(log_); }

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::usage:
      return "usage";
    case ErrorKind::precondition:
      return "precondition_violation";
    case ErrorKind::singular_matrix:
      return "singular_matrix";
    case ErrorKind::numerical_failure:
      return "numerical_failure";
    case ErrorKind::divergence:
      return "divergence";
    case ErrorKind::unbounded_trajectory:
      return "unbounded_trajectory";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::usage:
      return 1;
    case ErrorKind::precondition:
      return 3;
    case ErrorKind::singular_matrix:
    case ErrorKind::numerical_failure:
    case ErrorKind::divergence:
    case ErrorKind::unbounded_trajectory:
      return 2;
  }
  return 2;
}

}  // namespace seqspec
