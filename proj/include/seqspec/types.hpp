#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace seqspec {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxDim = 64;

bool is_finite(Complex z) noexcept;

/// Dense complex vector. Entries are validated finite on construction.
class CVector {
 public:
  CVector() = default;
  explicit CVector(std::size_t dim);
  explicit CVector(std::vector<Complex> entries);
  CVector(std::initializer_list<Complex> entries);

  std::size_t dim() const noexcept { return entries_.size(); }
  Complex operator[](std::size_t i) const { return entries_[i]; }
  Complex& operator[](std::size_t i) { return entries_[i]; }

  std::span<const Complex> entries() const noexcept { return entries_; }
  std::span<Complex> entries() noexcept { return entries_; }
  const Complex* data() const noexcept { return entries_.data(); }
  Complex* data() noexcept { return entries_.data(); }

  /// Euclidean norm.
  double norm() const noexcept;

  CVector& operator+=(const CVector& other);
  CVector& operator-=(const CVector& other);
  CVector& operator*=(Complex s) noexcept;

  friend CVector operator+(CVector a, const CVector& b) { return a += b; }
  friend CVector operator-(CVector a, const CVector& b) { return a -= b; }
  friend CVector operator*(Complex s, CVector a) { return a *= s; }

  bool operator==(const CVector&) const = default;

 private:
  std::vector<Complex> entries_;
};

/// Dense square complex matrix, row-major, 1 <= dim <= 64.
class CMatrix {
 public:
  explicit CMatrix(std::size_t dim);
  CMatrix(std::size_t dim, std::vector<Complex> entries);
  CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static CMatrix identity(std::size_t dim);
  static CMatrix diagonal(std::span<const Complex> diag);
  static CMatrix diagonal(std::initializer_list<Complex> diag);

  std::size_t dim() const noexcept { return dim_; }
  Complex operator()(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }
  Complex& operator()(std::size_t row, std::size_t col) { return entries_[row * dim_ + col]; }

  std::span<const Complex> entries() const noexcept { return entries_; }
  const Complex* data() const noexcept { return entries_.data(); }
  Complex* data() noexcept { return entries_.data(); }

  CMatrix adjoint() const;
  Complex trace() const noexcept;
  /// Largest entry modulus.
  double max_abs() const noexcept;

  CMatrix& operator+=(const CMatrix& other);
  CMatrix& operator-=(const CMatrix& other);
  CMatrix& operator*=(Complex s) noexcept;
  /// Adds s to every diagonal entry.
  CMatrix& add_identity(Complex s) noexcept;

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(Complex s, CMatrix a) { return a *= s; }

  bool operator==(const CMatrix&) const = default;

 private:
  std::size_t dim_;
  std::vector<Complex> entries_;
};

/// Natural logarithm of a non-negative magnitude with an explicit tag for an
/// exactly-zero magnitude, so log(0) never travels as a raw -inf double.
class LogMagnitude {
 public:
  static LogMagnitude zero() noexcept { return LogMagnitude(true, 0.0); }
  static LogMagnitude from_log(double log_value) noexcept { return LogMagnitude(false, log_value); }
  static LogMagnitude of(double magnitude);

  bool is_zero() const noexcept { return zero_; }
  /// Requires !is_zero().
  double log() const;
  /// exp(log()), 0 for the zero tag; may overflow to +inf for huge magnitudes.
  double value() const noexcept;

  bool operator==(const LogMagnitude&) const = default;

 private:
  LogMagnitude(bool zero, double log_value) noexcept : zero_(zero), log_(log_value) {}
  bool zero_;
  double log_;
};

}  // namespace seqspec
