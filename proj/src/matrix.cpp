#include "eberlein/matrix.hpp"

#include <cmath>

#include "eberlein/error.hpp"

namespace eberlein {

ComplexMatrix::ComplexMatrix(std::size_t n) : n_(n), data_(n * n) {}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : ComplexMatrix(rows.size()) {
  std::size_t i = 0;
  for (const auto& r : rows) {
    if (r.size() != n_) throw DimensionError("ComplexMatrix: rows must form a square array");
    std::size_t j = 0;
    for (const auto& x : r) (*this)(i, j++) = x;
    ++i;
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> d) {
  ComplexMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix r(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

bool ComplexMatrix::all_finite() const {
  for (const auto& x : data_)
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
  return true;
}

bool ComplexMatrix::is_real() const {
  for (const auto& x : data_)
    if (x.imag() != 0.0) return false;
  return true;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (other.n_ != n_) throw DimensionError("matrix sum: dimension mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (other.n_ != n_) throw DimensionError("matrix difference: dimension mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (auto& x : data_) x *= s;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw DimensionError("matrix product: dimension mismatch");
  ComplexMatrix r(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto out = r.row(i);
    for (std::size_t k = 0; k < n; ++k) {
      const Complex aik = a(i, k);
      if (aik == 0.0) continue;
      auto bk = b.row(k);
      for (std::size_t j = 0; j < n; ++j) out[j] += aik * bk[j];
    }
  }
  return r;
}

double frobenius_norm_sq(const ComplexMatrix& m) {
  double s = 0.0;
  for (const auto& x : m.data()) s += std::norm(x);
  return s;
}

double frobenius_norm(const ComplexMatrix& m) { return std::sqrt(frobenius_norm_sq(m)); }

double off_norm_sq(const ComplexMatrix& m) {
  const std::size_t n = m.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) s += std::norm(m(i, j));
  return s;
}

double off_norm(const ComplexMatrix& m) { return std::sqrt(off_norm_sq(m)); }

HermitianSplit split_hermitian(const ComplexMatrix& a) {
  const std::size_t n = a.size();
  HermitianSplit out{ComplexMatrix(n), ComplexMatrix(n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Complex x = a(i, j);
      const Complex y = std::conj(a(j, i));
      out.hermitian(i, j) = 0.5 * (x + y);
      out.skew(i, j) = 0.5 * (x - y);
    }
  }
  return out;
}

ComplexMatrix hermitian_part(const ComplexMatrix& a) {
  const std::size_t n = a.size();
  ComplexMatrix b(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
  return b;
}

double hermitian_off_norm(const ComplexMatrix& a) {
  const std::size_t n = a.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * std::norm(0.5 * (a(i, j) + std::conj(a(j, i))));
  return std::sqrt(s);
}

ComplexMatrix commutator(const ComplexMatrix& a) {
  // (AA*)_ij = sum_k a_ik conj(a_jk), (A*A)_ij = sum_k conj(a_ki) a_kj.
  // Only the upper triangle is computed; the result is Hermitian by
  // construction and its diagonal is exactly real.
  const std::size_t n = a.size();
  ComplexMatrix c(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += a(i, k) * std::conj(a(j, k)) - std::conj(a(k, i)) * a(k, j);
      if (i == j) {
        c(i, i) = s.real();
      } else {
        c(i, j) = s;
        c(j, i) = std::conj(s);
      }
    }
  }
  return c;
}

std::size_t pair_count(std::size_t n) { return n * (n - 1) / 2; }

std::size_t pair_index(std::size_t i, std::size_t j) { return j * (j - 1) / 2 + i; }

std::size_t vec_position(std::size_t i, std::size_t j) {
  return i < j ? 2 * pair_index(i, j) : 2 * pair_index(j, i) + 1;
}

std::pair<std::size_t, std::size_t> vec_entry(std::size_t position, std::size_t n) {
  const std::size_t k = position / 2;
  std::size_t j = 1;
  while (j < n && (j + 1) * j / 2 <= k) ++j;
  const std::size_t i = k - j * (j - 1) / 2;
  return position % 2 == 0 ? std::pair{i, j} : std::pair{j, i};
}

std::vector<Complex> vec_offdiag(const ComplexMatrix& b) {
  const std::size_t n = b.size();
  std::vector<Complex> v(2 * pair_count(n));
  std::size_t pos = 0;
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      v[pos++] = b(i, j);
      v[pos++] = b(j, i);
    }
  }
  return v;
}

ComplexMatrix scatter_offdiag(std::span<const Complex> v, std::size_t n) {
  if (v.size() != 2 * pair_count(n)) throw DimensionError("scatter_offdiag: vector length must be n(n-1)");
  ComplexMatrix b(n);
  std::size_t pos = 0;
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      b(i, j) = v[pos++];
      b(j, i) = v[pos++];
    }
  }
  return b;
}

}  // namespace eberlein
