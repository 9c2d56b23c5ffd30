#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace eberlein {

using Complex = std::complex<double>;

// Dense square complex matrix, row-major. Indices are 0-based.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t n);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const Complex> d);

  std::size_t size() const noexcept { return n_; }

  Complex& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * n_ + j];
  }

  std::span<Complex> row(std::size_t i) noexcept { return {data_.data() + i * n_, n_}; }
  std::span<const Complex> row(std::size_t i) const noexcept {
    return {data_.data() + i * n_, n_};
  }
  std::span<const Complex> data() const noexcept { return data_; }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  bool all_finite() const;
  // True when every imaginary part compares equal to zero.
  bool is_real() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex s);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, ComplexMatrix a);

double frobenius_norm(const ComplexMatrix& m);
double frobenius_norm_sq(const ComplexMatrix& m);

// Frobenius norm of the strictly off-diagonal part.
double off_norm(const ComplexMatrix& m);
double off_norm_sq(const ComplexMatrix& m);

// Hermitian part (A + A*)/2 and skew-Hermitian part (A - A*)/2.
struct HermitianSplit {
  ComplexMatrix hermitian;
  ComplexMatrix skew;
};
HermitianSplit split_hermitian(const ComplexMatrix& a);
ComplexMatrix hermitian_part(const ComplexMatrix& a);
// off((A + A*)/2) without forming the Hermitian part.
double hermitian_off_norm(const ComplexMatrix& a);

// C(A) = A A* - A* A. Zero exactly for normal matrices.
ComplexMatrix commutator(const ComplexMatrix& a);

// Off-diagonal vectorization. Pairs (i, j), i < j, are visited column by
// column over the strict upper triangle; pair number k contributes entry
// (i, j) at position 2k and entry (j, i) at position 2k + 1.
std::size_t pair_count(std::size_t n);
std::size_t pair_index(std::size_t i, std::size_t j);
std::size_t vec_position(std::size_t i, std::size_t j);
std::pair<std::size_t, std::size_t> vec_entry(std::size_t position, std::size_t n);

std::vector<Complex> vec_offdiag(const ComplexMatrix& b);
// Inverse of vec_offdiag; the diagonal of the result is zero.
ComplexMatrix scatter_offdiag(std::span<const Complex> v, std::size_t n);

}  // namespace eberlein
