#pragma once

#include <cstddef>

#include "eberlein/matrix.hpp"

namespace eberlein {

// Unitary plane rotation in the (p, q) plane. Its pivot block is
//
//   [  cos(phi)                -phase * sin(phi) ]
//   [  conj(phase) * sin(phi)   cos(phi)         ]
//
// with phase = exp(i * alpha). The phase is kept as a unit complex number
// rather than re-derived from alpha so that the real variant (alpha = pi,
// phase = -1) stays exactly real.
struct Rotation {
  std::size_t p = 0;
  std::size_t q = 1;
  double alpha = 0.0;
  Complex phase = 1.0;
  double cos_phi = 1.0;
  double sin_phi = 0.0;
  // Set when the diagonal-ordering exchange replaced phi by phi -+ pi/2.
  // The |phi| <= pi/4 bound does not hold for such rotations.
  bool exchanged = false;
  bool real = false;

  bool is_identity() const noexcept { return sin_phi == 0.0 && cos_phi == 1.0; }
};

// Non-unitary unimodular shear in the (p, q) plane. Its pivot block is
//
//   [  cosh(psi)                        -i exp(i beta) sinh(psi) ]
//   [  i exp(-i beta) sinh(psi)          cosh(psi)               ]
//
// which is Hermitian with determinant cosh^2 - sinh^2 = 1.
struct Shear {
  std::size_t p = 0;
  std::size_t q = 1;
  double beta = 0.0;
  double cosh_psi = 1.0;
  double sinh_psi = 0.0;
  // Norm reduction ||A~||_F^2 - ||A'||_F^2 predicted by the expansion in
  // (g, h, xi, d); exact up to rounding.
  double delta_pred = 0.0;
  bool real = false;

  bool is_identity() const noexcept { return sinh_psi == 0.0; }
  // The off-diagonal entry (p, q) of the pivot block; entry (q, p) is its
  // conjugate.
  Complex offdiag() const noexcept;
};

// Quantities the shear parameters are derived from, evaluated on the
// rotated iterate A~ at the pivot pair.
struct ShearWorkspace {
  double g = 0.0;
  double h = 0.0;
  Complex l = 0.0;
  Complex d_tilde = 0.0;
  Complex xi_tilde = 0.0;
  double e_tilde = 0.0;  // real mode only: a~_pq - a~_qp
  Complex c_pq = 0.0;    // pivot entry of C(A~)
  bool skipped = false;  // |c_pq| fell under the skip threshold
};

struct ShearResult {
  Shear shear;
  ShearWorkspace workspace;
};

// Relative threshold |c_pq| <= kShearSkip * ||A~||_F^2 below which the
// shear is the identity.
inline constexpr double kShearSkip = 1e-15;
// Tolerance on the Hermitian-ness of the rotation input.
inline constexpr double kHermitianTol = 1e-12;

// Rotation annihilating b_pq of the Hermitian matrix B (complex variant).
// With enforce_order, the rotation is exchanged when it would leave
// b~_pp < b~_qq.
Rotation compute_rotation(const ComplexMatrix& b, std::size_t p, std::size_t q,
                          bool enforce_order = false);

// Real variant: alpha = pi, tan(2 phi) = 2 b_pq / (b_qq - b_pp).
Rotation compute_rotation_real(const ComplexMatrix& b, std::size_t p, std::size_t q,
                               bool enforce_order = false);

// The two entries of b~ = R* B R that land on the pivot diagonal.
std::pair<double, double> rotated_pivot_diagonal(const ComplexMatrix& b, const Rotation& r);

// A <- R* A R, touching rows and columns p and q only.
void apply_rotation_inplace(ComplexMatrix& a, const Rotation& r);
ComplexMatrix apply_rotation(ComplexMatrix a, const Rotation& r);

ShearResult compute_shear(const ComplexMatrix& a_tilde, std::size_t p, std::size_t q,
                          bool real_mode = false);

// A <- S^{-1} A S, with S^{-1} taken as the adjugate of the unimodular block.
void apply_shear_inplace(ComplexMatrix& a, const Shear& s);
ComplexMatrix apply_shear(ComplexMatrix a, const Shear& s);
// A <- S A S^{-1}; undoes apply_shear.
void apply_shear_inverse_inplace(ComplexMatrix& a, const Shear& s);

// Accumulation helpers: T <- T * R and T <- T * S (column operations),
// Tinv <- R* * Tinv and Tinv <- S^{-1} * Tinv (row operations).
void right_multiply(ComplexMatrix& t, const Rotation& r);
void right_multiply(ComplexMatrix& t, const Shear& s);
void left_multiply_inverse(ComplexMatrix& t, const Rotation& r);
void left_multiply_inverse(ComplexMatrix& t, const Shear& s);

// Pivot blocks as 2x2 matrices, for tests and the annihilator construction.
ComplexMatrix embed(const Rotation& r, std::size_t n);
ComplexMatrix embed(const Shear& s, std::size_t n);

}  // namespace eberlein
