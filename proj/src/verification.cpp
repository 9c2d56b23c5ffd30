#include "eberlein/verification.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace eberlein {

Complex PolyCoefficients::operator()(Complex z) const {
  Complex v = 0.0;
  for (const auto& c : coeffs) v = v * z + c;
  return v;
}

PolyCoefficients char_poly(const ComplexMatrix& a) {
  const std::size_t n = a.size();
  if (n == 0) throw DimensionError("char_poly: empty matrix");
  if (n > kOracleMaxDim) {
    throw DimensionError("char_poly: n = " + std::to_string(n) + " exceeds the oracle limit of " +
                         std::to_string(kOracleMaxDim));
  }
  PolyCoefficients p;
  p.coeffs.assign(n + 1, 0.0);
  p.coeffs[0] = 1.0;
  ComplexMatrix m(n);
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t i = 0; i < n; ++i) m(i, i) += p.coeffs[k - 1];
    m = a * m;
    p.coeffs[k] = -m.trace() / static_cast<double>(k);
  }
  return p;
}

std::vector<Complex> poly_roots(const PolyCoefficients& p) {
  const std::size_t n = p.degree();
  if (n == 0) throw std::invalid_argument("poly_roots: degree must be at least 1");
  if (p.coeffs[0] != Complex(1.0)) throw std::invalid_argument("poly_roots: polynomial must be monic");

  double max_coeff = 0.0;
  for (const auto& c : p.coeffs) max_coeff = std::max(max_coeff, std::abs(c));
  const double radius = 1.0 + max_coeff;
  std::vector<Complex> z(n);
  for (std::size_t k = 0; k < n; ++k)
    z[k] = std::polar(radius, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) + 0.4);

  constexpr double eps = std::numeric_limits<double>::epsilon();
  // Running error bound of Horner's rule: |p(z) - fl(p(z))| <= 2 n u sum |c_k| |z|^(n-k).
  auto at_rounding_level = [&](Complex x) {
    double absval = 0.0;
    for (const auto& c : p.coeffs) absval = absval * std::abs(x) + std::abs(c);
    return std::abs(p(x)) <= 4.0 * static_cast<double>(n) * eps * absval;
  };

  for (int sweep = 0; sweep < 1000; ++sweep) {
    double moved = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      Complex denom = 1.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) denom *= z[k] - z[j];
      const Complex value = p(z[k]);
      if (value == 0.0) continue;
      if (denom == 0.0) {
        // Coincident iterates; nudge apart.
        z[k] += std::polar(1e-8 * radius, 0.4 + static_cast<double>(k));
        moved = std::numeric_limits<double>::infinity();
        continue;
      }
      const Complex step = value / denom;
      z[k] -= step;
      moved = std::max(moved, std::abs(step));
    }
    if (moved < 1e-13 || std::all_of(z.begin(), z.end(), at_rounding_level)) return z;
  }
  throw RootFindingError("poly_roots: no convergence within 1000 sweeps", z);
}

std::vector<Complex> oracle_eigenvalues(const ComplexMatrix& a) {
  if (a.size() == 1) return {a(0, 0)};
  return poly_roots(char_poly(a));
}

void fill_block_eigenvalues(const ComplexMatrix& lambda, BlockPartition& partition) {
  partition.block_eigenvalues.clear();
  for (const auto& b : partition.blocks) {
    ComplexMatrix sub(b.size());
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) sub(i, j) = lambda(b.begin + i, b.begin + j);
    partition.block_eigenvalues.push_back(oracle_eigenvalues(sub));
  }
}

double matching_distance(std::span<const Complex> a, std::span<const Complex> b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw DimensionError("matching_distance: multisets differ in size");
  if (n > 20) throw DimensionError("matching_distance: at most 20 elements");
  const std::size_t full = std::size_t{1} << n;
  // best[mask]: bottleneck cost of pairing a[0..popcount(mask)) with b[mask].
  std::vector<double> best(full, std::numeric_limits<double>::infinity());
  best[0] = 0.0;
  for (std::size_t mask = 0; mask < full; ++mask) {
    if (best[mask] == std::numeric_limits<double>::infinity()) continue;
    const std::size_t i = static_cast<std::size_t>(std::popcount(mask));
    if (i == n) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (mask & (std::size_t{1} << j)) continue;
      const std::size_t next = mask | (std::size_t{1} << j);
      best[next] = std::min(best[next], std::max(best[mask], std::abs(a[i] - b[j])));
    }
  }
  return best[full - 1];
}

ComplexMatrix random_unitary(std::size_t n, Random& rng) {
  for (int attempt = 0; attempt < 5; ++attempt) {
    ComplexMatrix g(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
    bool degenerate = false;
    for (int pass = 0; pass < 2 && !degenerate; ++pass) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < j; ++k) {
          Complex dot = 0.0;
          for (std::size_t i = 0; i < n; ++i) dot += std::conj(g(i, k)) * g(i, j);
          for (std::size_t i = 0; i < n; ++i) g(i, j) -= dot * g(i, k);
        }
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) norm += std::norm(g(i, j));
        norm = std::sqrt(norm);
        if (norm < 1e-10) {
          degenerate = true;
          break;
        }
        for (std::size_t i = 0; i < n; ++i) g(i, j) /= norm;
      }
    }
    if (degenerate) continue;
    if (frobenius_norm(g.adjoint() * g - ComplexMatrix::identity(n)) <= 1e-13) return g;
  }
  throw NumericalError("random_unitary: could not produce an orthonormal basis in 5 attempts");
}

KnownSpectrum known_spectrum_matrix(std::span<const Complex> diag_t, double upper_scale,
                                    std::uint64_t seed, bool decouple_repeated) {
  const std::size_t n = diag_t.size();
  if (n == 0) throw std::invalid_argument("known_spectrum_matrix: empty spectrum");
  if (!(upper_scale >= 0.0)) throw std::invalid_argument("known_spectrum_matrix: upper_scale < 0");
  Random rng(seed);
  ComplexMatrix t = ComplexMatrix::diagonal(diag_t);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double x = rng.normal();
      const double y = rng.normal();
      if (!(decouple_repeated && diag_t[i] == diag_t[j])) t(i, j) = upper_scale * Complex(x, y);
    }
  }
  KnownSpectrum out;
  out.q = random_unitary(n, rng);
  out.a = out.q.adjoint() * t * out.q;
  out.spectrum.assign(diag_t.begin(), diag_t.end());
  return out;
}

ComplexMatrix random_complex_matrix(std::size_t n, std::uint64_t seed) {
  Random rng(seed);
  ComplexMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double x = rng.normal();
      const double y = rng.normal();
      a(i, j) = Complex(x, y);
    }
  return a;
}

ComplexMatrix random_real_matrix(std::size_t n, std::uint64_t seed) {
  Random rng(seed);
  ComplexMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.normal();
  return a;
}

ComplexMatrix random_hermitian_matrix(std::size_t n, std::uint64_t seed) {
  return hermitian_part(random_complex_matrix(n, seed));
}

ResidualReport residual_report(const ComplexMatrix& a_k, const ComplexMatrix& a_tilde,
                               const ComplexMatrix& a_next, const ComplexMatrix& b_next,
                               const ComplexMatrix& b_tilde, double c_pq_abs, std::size_t n) {
  ResidualReport r;
  r.norm_e_sq = frobenius_norm_sq(a_next - a_tilde);
  r.norm_f_sq = frobenius_norm_sq(b_next - b_tilde);
  const double nn = static_cast<double>(n);
  r.bound = 1.5 * nn * nn * c_pq_abs;
  const double slack = 1e-10 * frobenius_norm_sq(a_k);
  r.satisfied = r.norm_e_sq <= r.bound + slack && r.norm_f_sq <= r.bound + slack;
  return r;
}

JacobiAnnihilator jacobi_annihilator(std::size_t n, const Rotation& r) {
  if (!(r.p < r.q && r.q < n)) throw DimensionError("jacobi_annihilator: invalid pivot");
  if (r.exchanged || r.cos_phi < std::numbers::sqrt2 / 2 - 1e-14) {
    throw ContractViolation("jacobi_annihilator: rotation angle exceeds pi/4");
  }
  const std::size_t dim = 2 * pair_count(n);
  JacobiAnnihilator out{n, r.p, r.q, ComplexMatrix(dim)};
  std::vector<Complex> unit(dim);
  for (std::size_t col = 0; col < dim; ++col) {
    std::fill(unit.begin(), unit.end(), Complex(0.0));
    unit[col] = 1.0;
    ComplexMatrix probe = scatter_offdiag(unit, n);
    apply_rotation_inplace(probe, r);
    probe(r.p, r.q) = 0.0;
    probe(r.q, r.p) = 0.0;
    const std::vector<Complex> image = vec_offdiag(probe);
    for (std::size_t row = 0; row < dim; ++row) out.matrix(row, col) = image[row];
  }
  return out;
}

ComplexMatrix jacobi_operator(const PivotOrdering& o, std::span<const Rotation> rotations) {
  if (rotations.size() != o.pairs.size())
    throw DimensionError("jacobi_operator: one rotation per pivot pair is required");
  const std::size_t dim = 2 * pair_count(o.n);
  ComplexMatrix j = ComplexMatrix::identity(dim);
  for (std::size_t k = 0; k < rotations.size(); ++k) {
    if (rotations[k].p != o.pairs[k].first || rotations[k].q != o.pairs[k].second)
      throw std::invalid_argument("jacobi_operator: rotation " + std::to_string(k + 1) +
                                  " does not match the ordering's pivot");
    j = jacobi_annihilator(o.n, rotations[k]).matrix * j;
  }
  return j;
}

namespace {

// Largest eigenvalue of the symmetric tridiagonal matrix (a, b) by bisection
// on the Sturm count.
double tridiagonal_max_eigenvalue(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t k = a.size();
  double lo = a[0];
  double hi = a[0];
  for (std::size_t i = 0; i < k; ++i) {
    const double r = (i > 0 ? std::abs(b[i - 1]) : 0.0) + (i + 1 < k ? std::abs(b[i]) : 0.0);
    lo = std::min(lo, a[i] - r);
    hi = std::max(hi, a[i] + r);
  }
  auto count_below = [&](double x) {
    std::size_t c = 0;
    double d = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
      d = a[i] - x - (i > 0 ? b[i - 1] * b[i - 1] / d : 0.0);
      if (d == 0.0) d = -1e-300;
      if (d < 0.0) ++c;
    }
    return c;
  };
  for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * std::abs(hi);
       ++it) {
    const double mid = 0.5 * (lo + hi);
    if (count_below(mid) == k) hi = mid;
    else lo = mid;
  }
  return hi;
}

Complex dot(const std::vector<Complex>& u, const std::vector<Complex>& v) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * v[i];
  return s;
}

}  // namespace

double spectral_norm(const ComplexMatrix& m, std::uint64_t seed) {
  const std::size_t n = m.size();
  if (!m.all_finite()) throw NumericalError("spectral_norm: non-finite matrix");
  const double fro_sq = frobenius_norm_sq(m);
  if (fro_sq == 0.0) return 0.0;

  auto normalize = [](std::vector<Complex>& v) {
    const double s = std::sqrt(dot(v, v).real());
    if (s > 0.0)
      for (auto& x : v) x /= s;
    return s;
  };
  auto apply_gram = [&](const std::vector<Complex>& x) {
    std::vector<Complex> y(n);
    std::vector<Complex> z(n);
    for (std::size_t i = 0; i < n; ++i) {
      Complex s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += m(i, j) * x[j];
      y[i] = s;
    }
    for (std::size_t j = 0; j < n; ++j) {
      Complex s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += std::conj(m(i, j)) * y[i];
      z[j] = s;
    }
    return z;
  };

  Random rng(seed);
  std::vector<std::vector<Complex>> basis(1, std::vector<Complex>(n));
  for (auto& v : basis[0]) v = Complex(rng.normal(), rng.normal());
  normalize(basis[0]);

  std::vector<double> alpha;
  std::vector<double> beta;
  double theta = 0.0;
  constexpr int kBudget = 10000;
  constexpr std::size_t kExhaustiveDim = 256;
  for (int it = 0; it < kBudget; ++it) {
    std::vector<Complex> w = apply_gram(basis.back());
    alpha.push_back(dot(basis.back(), w).real());
    // Full reorthogonalization, twice.
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& v : basis) {
        const Complex c = dot(v, w);
        for (std::size_t i = 0; i < n; ++i) w[i] -= c * v[i];
      }
    const double next = tridiagonal_max_eigenvalue(alpha, beta);
    // Clustered leading values make the Ritz value creep, so small matrices
    // always run until the Krylov space is exhausted.
    const bool stalled =
        n > kExhaustiveDim && it > 0 && std::abs(next - theta) <= 1e-12 * next;
    theta = next;
    const double b = normalize(w);
    // The Krylov space is invariant once it spans everything or b vanishes.
    if (stalled || basis.size() == n || b <= 1e-14 * std::sqrt(fro_sq) * std::sqrt(fro_sq))
      return std::sqrt(std::max(theta, 0.0));
    beta.push_back(b);
    basis.push_back(std::move(w));
  }
  throw SpectralNormError("spectral_norm: Lanczos iteration did not settle in " +
                              std::to_string(kBudget) + " steps",
                          std::sqrt(std::max(theta, 0.0)));
}

}  // namespace eberlein
