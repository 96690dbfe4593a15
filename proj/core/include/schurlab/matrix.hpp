#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace schurlab {

using cplx = std::complex<double>;

// Dense complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const double> d);
  static ComplexMatrix from_real(std::size_t rows, std::size_t cols, std::span<const double> entries);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<cplx> data() noexcept { return data_; }
  std::span<const cplx> data() const noexcept { return data_; }

  bool is_finite() const noexcept;
  // True when every imaginary part is exactly zero.
  bool is_real() const noexcept;
  bool is_hermitian(double tol = 0.0) const noexcept;

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  double frobenius_norm() const noexcept;
  double max_abs() const noexcept;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(cplx s) noexcept;

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  bool operator==(const ComplexMatrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix kronecker(const ComplexMatrix& a, const ComplexMatrix& b);

// Direct sum diag(blocks...), rectangular blocks allowed.
ComplexMatrix block_diagonal(std::span<const ComplexMatrix> blocks);

// Frobenius norm of a - b; throws InvalidInput on shape mismatch.
double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b);

// <a, b> = tr(a* b).
cplx trace_inner(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace schurlab
