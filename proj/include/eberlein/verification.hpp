#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "eberlein/diagnostics.hpp"
#include "eberlein/error.hpp"
#include "eberlein/matrix.hpp"
#include "eberlein/pivot.hpp"
#include "eberlein/random.hpp"
#include "eberlein/transforms.hpp"

namespace eberlein {

// Largest dimension the characteristic-polynomial oracle accepts.
inline constexpr std::size_t kOracleMaxDim = 8;

// Monic polynomial; coeffs[k] multiplies lambda^(degree - k), coeffs[0] = 1.
struct PolyCoefficients {
  std::vector<Complex> coeffs;

  std::size_t degree() const noexcept { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  Complex operator()(Complex z) const;
};

// Faddeev-LeVerrier recurrence.
PolyCoefficients char_poly(const ComplexMatrix& a);

class RootFindingError : public NumericalError {
 public:
  RootFindingError(const std::string& what, std::vector<Complex> partial)
      : NumericalError(what), partial_(std::move(partial)) {}
  const std::vector<Complex>& partial() const noexcept { return partial_; }

 private:
  std::vector<Complex> partial_;
};

// Durand-Kerner simultaneous iteration. Starts from r exp(i (2 pi k / n + 0.4))
// with r = 1 + max |coeff|, runs at most 1000 sweeps, and stops when no root
// moves by 1e-13 or more, or when every residual |p(z)| is within the
// rounding-error bound of its Horner evaluation (multiple roots never
// settle below the first criterion).
std::vector<Complex> poly_roots(const PolyCoefficients& p);

// Eigenvalues of a small matrix through the two routines above.
std::vector<Complex> oracle_eigenvalues(const ComplexMatrix& a);

// Fills partition.block_eigenvalues with the oracle eigenvalues of each
// diagonal block of lambda.
void fill_block_eigenvalues(const ComplexMatrix& lambda, BlockPartition& partition);

// Smallest achievable maximum distance over all pairings of a with b.
double matching_distance(std::span<const Complex> a, std::span<const Complex> b);

struct KnownSpectrum {
  ComplexMatrix a;
  std::vector<Complex> spectrum;
  ComplexMatrix q;  // the unitary factor, A = Q* T Q
};

// A = Q* T Q with T upper triangular, diag(T) = diag_t and strict upper
// entries (x + iy) * upper_scale, x, y standard normal. Q orthonormalizes a
// random complex Gaussian matrix (modified Gram-Schmidt, applied twice).
// upper_scale = 0 gives a normal A. With decouple_repeated, t_ij = 0 whenever
// t_ii == t_jj (the random draws are still consumed); if equal values sit
// next to each other on the diagonal, T is then diagonalizable.
KnownSpectrum known_spectrum_matrix(std::span<const Complex> diag_t, double upper_scale,
                                    std::uint64_t seed, bool decouple_repeated = false);

ComplexMatrix random_unitary(std::size_t n, Random& rng);
ComplexMatrix random_complex_matrix(std::size_t n, std::uint64_t seed);
ComplexMatrix random_real_matrix(std::size_t n, std::uint64_t seed);
ComplexMatrix random_hermitian_matrix(std::size_t n, std::uint64_t seed);

// E = A^(k+1) - A~, F = B^(k+1) - B~ against 1.5 n^2 |c~_pq|.
struct ResidualReport {
  double norm_e_sq = 0.0;
  double norm_f_sq = 0.0;
  double bound = 0.0;
  bool satisfied = true;
};

ResidualReport residual_report(const ComplexMatrix& a_k, const ComplexMatrix& a_tilde,
                               const ComplexMatrix& a_next, const ComplexMatrix& b_next,
                               const ComplexMatrix& b_tilde, double c_pq_abs, std::size_t n);

// Matrix of vec(B) -> vec(N_pq(R* B R)) on the off-diagonal vectorization
// (see vec_offdiag), built by applying the rule to each elementary
// off-diagonal basis matrix.
struct JacobiAnnihilator {
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t q = 0;
  ComplexMatrix matrix;
};

JacobiAnnihilator jacobi_annihilator(std::size_t n, const Rotation& r);

// R_{N-1} ... R_1 R_0 for the ordering's pivots and the given rotations.
ComplexMatrix jacobi_operator(const PivotOrdering& o, std::span<const Rotation> rotations);

class SpectralNormError : public NumericalError {
 public:
  SpectralNormError(const std::string& what, double estimate)
      : NumericalError(what), estimate_(estimate) {}
  double estimate() const noexcept { return estimate_; }

 private:
  double estimate_;
};

// Largest singular value: Lanczos on M* M (power iteration with the Krylov
// history kept and fully reorthogonalized) from a seeded random start. Stops
// when the Krylov space becomes invariant or, for n > 256, when the top Ritz
// value changes by at most 1e-12 relative; at most 10000 iterations. Plain
// power iteration
// cannot separate nearly equal leading singular values in that budget.
double spectral_norm(const ComplexMatrix& m, std::uint64_t seed = 0x5eed);

}  // namespace eberlein
