#pragma once

#include <complex>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace rmtq {

using Complex = std::complex<double>;

/// Raised when an iterative numerical routine does not converge.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense d x s complex matrix, row-major.
class ComplexRectMatrix {
 public:
  ComplexRectMatrix(int rows, int cols);
  ComplexRectMatrix(int rows, int cols, std::vector<Complex> data);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Complex& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  const Complex& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  std::span<const Complex> data() const { return data_; }
  std::span<Complex> data() { return data_; }

 private:
  int rows_;
  int cols_;
  std::vector<Complex> data_;
};

/// Dense Hermitian n x n matrix, stored in full row-major form.
///
/// Construction symmetrizes the input as (A + A*)/2, so accumulation noise of
/// a few ulps in products like G G* never leaks into the spectrum.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(int n);
  HermitianMatrix(int n, std::vector<Complex> data);

  static HermitianMatrix identity(int n);
  static HermitianMatrix diagonal(std::span<const double> values);
  static HermitianMatrix from_real(int n, std::span<const double> row_major);

  int size() const { return n_; }

  const Complex& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * n_ + j]; }
  std::span<const Complex> data() const { return data_; }

  double trace() const;

  HermitianMatrix& operator+=(const HermitianMatrix& other);
  HermitianMatrix& operator*=(double factor);

  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
  friend HermitianMatrix operator*(double f, HermitianMatrix a) { return a *= f; }

 private:
  struct Trusted {};
  HermitianMatrix(int n, std::vector<Complex> data, Trusted) : n_(n), data_(std::move(data)) {}
  friend HermitianMatrix gram(const ComplexRectMatrix& g);

  int n_;
  std::vector<Complex> data_;
};

/// Real eigenvalues sorted non-increasingly.
class Spectrum {
 public:
  Spectrum() = default;
  /// Sorts the input; throws std::invalid_argument on non-finite values.
  explicit Spectrum(std::vector<double> values);

  int size() const { return static_cast<int>(values_.size()); }
  std::span<const double> values() const { return values_; }

  /// 1-based access, lambda_1 >= lambda_2 >= ... >= lambda_n.
  double operator()(int i) const { return values_[i - 1]; }
  double largest() const { return values_.front(); }
  double smallest() const { return values_.back(); }
  double sum() const;

 private:
  std::vector<double> values_;
};

/// G G* for a d x s matrix G, computed with cache blocking over the columns.
HermitianMatrix gram(const ComplexRectMatrix& g);

/// Householder reduction to real tridiagonal form, then implicit-shift QL.
/// Throws NumericalFailure if an eigenvalue needs more than 60 sweeps.
Spectrum hermitian_eigenvalues(const HermitianMatrix& a);

double operator_norm(const HermitianMatrix& a);
double max_abs_entry(const HermitianMatrix& a);

/// 1e-10 * operator_norm(a).
double default_psd_tolerance(const HermitianMatrix& a);

/// lambda_min(a) >= -tol; tol defaults to default_psd_tolerance(a).
bool is_psd(const HermitianMatrix& a, std::optional<double> tol = std::nullopt);

}  // namespace rmtq
