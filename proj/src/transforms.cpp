#include "eberlein/transforms.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "eberlein/error.hpp"

namespace eberlein {
namespace {

template <typename T>
using Block = std::array<std::array<T, 2>, 2>;

void check_pivot(std::size_t n, std::size_t p, std::size_t q) {
  if (!(p < q && q < n)) {
    throw DimensionError("pivot (" + std::to_string(p + 1) + ", " + std::to_string(q + 1) +
                         ") is not a valid pair for n = " + std::to_string(n));
  }
}

double sign_nonneg(double x) { return x >= 0.0 ? 1.0 : -1.0; }

// A <- L A M restricted to rows/columns p, q (L acts on rows, M on columns).
// Passing double coefficients keeps real data exactly real.
template <typename T>
void two_sided(ComplexMatrix& a, std::size_t p, std::size_t q, const Block<T>& left,
               const Block<T>& right) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Complex x = a(i, p);
    const Complex y = a(i, q);
    a(i, p) = x * right[0][0] + y * right[1][0];
    a(i, q) = x * right[0][1] + y * right[1][1];
  }
  auto rp = a.row(p);
  auto rq = a.row(q);
  for (std::size_t j = 0; j < n; ++j) {
    const Complex x = rp[j];
    const Complex y = rq[j];
    rp[j] = left[0][0] * x + left[0][1] * y;
    rq[j] = left[1][0] * x + left[1][1] * y;
  }
}

template <typename T>
void columns_only(ComplexMatrix& a, std::size_t p, std::size_t q, const Block<T>& right) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Complex x = a(i, p);
    const Complex y = a(i, q);
    a(i, p) = x * right[0][0] + y * right[1][0];
    a(i, q) = x * right[0][1] + y * right[1][1];
  }
}

template <typename T>
void rows_only(ComplexMatrix& a, std::size_t p, std::size_t q, const Block<T>& left) {
  auto rp = a.row(p);
  auto rq = a.row(q);
  for (std::size_t j = 0; j < a.size(); ++j) {
    const Complex x = rp[j];
    const Complex y = rq[j];
    rp[j] = left[0][0] * x + left[0][1] * y;
    rq[j] = left[1][0] * x + left[1][1] * y;
  }
}

Block<Complex> rotation_block(const Rotation& r) {
  const double c = r.cos_phi;
  const double s = r.sin_phi;
  return {{{Complex(c), -r.phase * s}, {std::conj(r.phase) * s, Complex(c)}}};
}

Block<Complex> rotation_block_adjoint(const Rotation& r) {
  const double c = r.cos_phi;
  const double s = r.sin_phi;
  return {{{Complex(c), r.phase * s}, {-std::conj(r.phase) * s, Complex(c)}}};
}

// Real rotations carry phase = -1: block [[c, s], [-s, c]].
Block<double> real_rotation_block(const Rotation& r) {
  return {{{r.cos_phi, r.sin_phi}, {-r.sin_phi, r.cos_phi}}};
}

Block<double> real_rotation_block_adjoint(const Rotation& r) {
  return {{{r.cos_phi, -r.sin_phi}, {r.sin_phi, r.cos_phi}}};
}

Block<Complex> shear_block(const Shear& s, bool inverse) {
  const Complex w = inverse ? -s.offdiag() : s.offdiag();
  return {{{Complex(s.cosh_psi), w}, {std::conj(w), Complex(s.cosh_psi)}}};
}

// Real shears carry beta = pi/2: block [[ch, sh], [sh, ch]].
Block<double> real_shear_block(const Shear& s, bool inverse) {
  const double w = inverse ? -s.sinh_psi : s.sinh_psi;
  return {{{s.cosh_psi, w}, {w, s.cosh_psi}}};
}

void check_hermitian_pivot(const ComplexMatrix& b, std::size_t p, std::size_t q) {
  const double scale = std::abs(b(p, p)) + std::abs(b(q, q)) + std::abs(b(p, q)) +
                       std::abs(b(q, p));
  const double tol = kHermitianTol * std::max(scale, 1.0);
  if (std::abs(b(p, q) - std::conj(b(q, p))) > tol || std::abs(b(p, p).imag()) > tol ||
      std::abs(b(q, q).imag()) > tol) {
    throw ContractViolation("rotation input is not Hermitian at pivot (" + std::to_string(p + 1) +
                            ", " + std::to_string(q + 1) + ")");
  }
}

// phi -> phi - pi/2 for sin(phi) > 0, phi + pi/2 otherwise; keeps cos >= 0.
void exchange(Rotation& r) {
  const double c = r.cos_phi;
  const double s = r.sin_phi;
  if (s > 0.0) {
    r.cos_phi = s;
    r.sin_phi = -c;
  } else {
    r.cos_phi = -s;
    r.sin_phi = c;
  }
  r.exchanged = true;
}

void maybe_exchange(const ComplexMatrix& b, Rotation& r, bool enforce_order) {
  if (!enforce_order) return;
  const auto [bpp, bqq] = rotated_pivot_diagonal(b, r);
  if (bpp < bqq) exchange(r);
}

struct Candidate {
  double beta;
  double h;
  Complex xi;
  double tanh_psi;
  double delta;
};

// Delta(psi) = g (1 - cosh 2psi) - h sinh 2psi + (|xi|^2 + |d|^2)/2 (1 - cosh 4psi)
//              + Im(xi conj(d)) sinh 4psi,
// rewritten in sinh/cosh of psi to avoid cancellation for small psi.
double delta_expansion(double g, double h, Complex xi, Complex d, double ch, double sh) {
  const double s2 = 2.0 * sh * ch;
  const double c2 = 1.0 + 2.0 * sh * sh;
  const double im = (xi * std::conj(d)).imag();
  return -2.0 * g * sh * sh - h * s2 - (std::norm(xi) + std::norm(d)) * s2 * s2 + 2.0 * im * s2 * c2;
}

double tanh_from(double numerator, double denominator, std::size_t p, std::size_t q) {
  if (denominator == 0.0) {
    if (numerator == 0.0) return 0.0;
    throw NumericalError("shear denominator vanished at pivot (" + std::to_string(p + 1) + ", " +
                         std::to_string(q + 1) + ")");
  }
  const double t = numerator / denominator;
  if (!(std::abs(t) < 1.0)) {
    throw NumericalError("shear parameter |tanh(psi)| >= 1 at pivot (" + std::to_string(p + 1) +
                         ", " + std::to_string(q + 1) + ")");
  }
  return t;
}

Candidate evaluate_beta(double beta, const ShearWorkspace& ws, Complex apq, Complex aqp,
                        std::size_t p, std::size_t q) {
  const double cb = std::cos(beta);
  const double sb = std::sin(beta);
  Candidate c;
  c.beta = beta;
  c.h = -ws.l.real() * sb + ws.l.imag() * cb;
  c.xi = (apq + aqp) * cb - Complex(0.0, 1.0) * (apq - aqp) * sb;
  const double num = 0.5 * (2.0 * (c.xi * std::conj(ws.d_tilde)).imag() - c.h);
  const double den = ws.g + 2.0 * (std::norm(c.xi) + std::norm(ws.d_tilde));
  c.tanh_psi = tanh_from(num, den, p, q);
  const double ch = 1.0 / std::sqrt(1.0 - c.tanh_psi * c.tanh_psi);
  c.delta = delta_expansion(ws.g, c.h, c.xi, ws.d_tilde, ch, c.tanh_psi * ch);
  return c;
}

double wrap_angle(double x) {
  constexpr double pi = std::numbers::pi;
  while (x > pi) x -= 2.0 * pi;
  while (x <= -pi) x += 2.0 * pi;
  return x;
}

}  // namespace

Complex Shear::offdiag() const noexcept {
  if (real) return Complex(sinh_psi, 0.0);
  // -i exp(i beta) = sin(beta) - i cos(beta)
  return Complex(std::sin(beta), -std::cos(beta)) * sinh_psi;
}

std::pair<double, double> rotated_pivot_diagonal(const ComplexMatrix& b, const Rotation& r) {
  const Block<Complex> m = rotation_block(r);
  const Block<Complex> bb{{{b(r.p, r.p), b(r.p, r.q)}, {b(r.q, r.p), b(r.q, r.q)}}};
  auto quad = [&](int col) {
    // m(:,col)^* bb m(:,col)
    Complex s = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) s += std::conj(m[i][col]) * bb[i][j] * m[j][col];
    return s.real();
  };
  return {quad(0), quad(1)};
}

Rotation compute_rotation(const ComplexMatrix& b, std::size_t p, std::size_t q,
                          bool enforce_order) {
  check_pivot(b.size(), p, q);
  check_hermitian_pivot(b, p, q);
  Rotation r;
  r.p = p;
  r.q = q;
  const Complex bpq = b(p, q);
  const double abs_b = std::abs(bpq);
  if (abs_b != 0.0) {
    r.alpha = std::arg(bpq);
    r.phase = bpq / abs_b;
    const double d = b(p, p).real() - b(q, q).real();
    const double t = 2.0 * abs_b * sign_nonneg(d) / (std::abs(d) + std::hypot(d, 2.0 * abs_b));
    r.cos_phi = 1.0 / std::sqrt(1.0 + t * t);
    r.sin_phi = t * r.cos_phi;
  }
  maybe_exchange(b, r, enforce_order);
  return r;
}

Rotation compute_rotation_real(const ComplexMatrix& b, std::size_t p, std::size_t q,
                               bool enforce_order) {
  check_pivot(b.size(), p, q);
  check_hermitian_pivot(b, p, q);
  if (b(p, q).imag() != 0.0) {
    throw ContractViolation("real rotation requires a real pivot entry at (" +
                            std::to_string(p + 1) + ", " + std::to_string(q + 1) + ")");
  }
  Rotation r;
  r.p = p;
  r.q = q;
  r.real = true;
  r.alpha = std::numbers::pi;
  r.phase = -1.0;
  const double bpq = b(p, q).real();
  if (bpq != 0.0) {
    const double d = b(q, q).real() - b(p, p).real();
    const double t = 2.0 * bpq * sign_nonneg(d) / (std::abs(d) + std::hypot(d, 2.0 * bpq));
    r.cos_phi = 1.0 / std::sqrt(1.0 + t * t);
    r.sin_phi = t * r.cos_phi;
  }
  maybe_exchange(b, r, enforce_order);
  return r;
}

void apply_rotation_inplace(ComplexMatrix& a, const Rotation& r) {
  check_pivot(a.size(), r.p, r.q);
  if (r.is_identity()) return;
  if (r.real) {
    two_sided(a, r.p, r.q, real_rotation_block_adjoint(r), real_rotation_block(r));
  } else {
    two_sided(a, r.p, r.q, rotation_block_adjoint(r), rotation_block(r));
  }
}

ComplexMatrix apply_rotation(ComplexMatrix a, const Rotation& r) {
  apply_rotation_inplace(a, r);
  return a;
}

ShearResult compute_shear(const ComplexMatrix& at, std::size_t p, std::size_t q, bool real_mode) {
  const std::size_t n = at.size();
  check_pivot(n, p, q);
  ShearResult out;
  Shear& s = out.shear;
  ShearWorkspace& ws = out.workspace;
  s.p = p;
  s.q = q;
  s.real = real_mode;

  Complex c = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    c += at(p, k) * std::conj(at(q, k)) - std::conj(at(k, p)) * at(k, q);
  Complex l = 0.0;
  double g = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == p || i == q) continue;
    g += std::norm(at(i, p)) + std::norm(at(p, i)) + std::norm(at(i, q)) + std::norm(at(q, i));
    l += at(p, i) * std::conj(at(q, i)) - std::conj(at(i, p)) * at(i, q);
  }
  ws.c_pq = real_mode ? Complex(c.real(), 0.0) : c;
  ws.g = g;
  ws.l = 2.0 * l;
  ws.d_tilde = at(p, p) - at(q, q);

  const Complex apq = at(p, q);
  const Complex aqp = at(q, p);
  s.beta = real_mode ? std::numbers::pi / 2 : 0.0;
  if (real_mode) {
    ws.e_tilde = (apq - aqp).real();
    ws.xi_tilde = Complex(0.0, -ws.e_tilde);
    ws.h = -ws.l.real();
  }

  if (std::abs(ws.c_pq) <= kShearSkip * frobenius_norm_sq(at)) {
    ws.skipped = true;
    return out;
  }

  double tanh_psi = 0.0;
  if (real_mode) {
    const double d = ws.d_tilde.real();
    const double den = g + 2.0 * (ws.e_tilde * ws.e_tilde + d * d);
    tanh_psi = tanh_from(ws.c_pq.real(), den, p, q);
  } else {
    // tan(beta) = -Re(c) / Im(c) fixes beta up to pi; both roots describe
    // the same family of shears, so keep the one with the larger gain.
    const double beta0 = std::atan2(-c.real(), c.imag());
    const double beta1 = wrap_angle(beta0 + std::numbers::pi);
    const bool first_preferred = beta0 > -std::numbers::pi / 2 && beta0 <= std::numbers::pi / 2;
    const Candidate a = evaluate_beta(first_preferred ? beta0 : beta1, ws, apq, aqp, p, q);
    const Candidate b = evaluate_beta(first_preferred ? beta1 : beta0, ws, apq, aqp, p, q);
    const double margin = 1e-14 * (std::abs(a.delta) + std::abs(b.delta));
    const Candidate& best = b.delta > a.delta + margin ? b : a;
    s.beta = best.beta;
    ws.h = best.h;
    ws.xi_tilde = best.xi;
    tanh_psi = best.tanh_psi;
  }

  s.cosh_psi = 1.0 / std::sqrt(1.0 - tanh_psi * tanh_psi);
  s.sinh_psi = tanh_psi * s.cosh_psi;
  s.delta_pred = delta_expansion(ws.g, ws.h, ws.xi_tilde, ws.d_tilde, s.cosh_psi, s.sinh_psi);
  return out;
}

void apply_shear_inplace(ComplexMatrix& a, const Shear& s) {
  check_pivot(a.size(), s.p, s.q);
  if (s.is_identity()) return;
  if (s.real) {
    two_sided(a, s.p, s.q, real_shear_block(s, true), real_shear_block(s, false));
  } else {
    two_sided(a, s.p, s.q, shear_block(s, true), shear_block(s, false));
  }
}

ComplexMatrix apply_shear(ComplexMatrix a, const Shear& s) {
  apply_shear_inplace(a, s);
  return a;
}

void apply_shear_inverse_inplace(ComplexMatrix& a, const Shear& s) {
  check_pivot(a.size(), s.p, s.q);
  if (s.is_identity()) return;
  if (s.real) {
    two_sided(a, s.p, s.q, real_shear_block(s, false), real_shear_block(s, true));
  } else {
    two_sided(a, s.p, s.q, shear_block(s, false), shear_block(s, true));
  }
}

void right_multiply(ComplexMatrix& t, const Rotation& r) {
  if (r.is_identity()) return;
  if (r.real) {
    columns_only(t, r.p, r.q, real_rotation_block(r));
  } else {
    columns_only(t, r.p, r.q, rotation_block(r));
  }
}

void right_multiply(ComplexMatrix& t, const Shear& s) {
  if (s.is_identity()) return;
  if (s.real) {
    columns_only(t, s.p, s.q, real_shear_block(s, false));
  } else {
    columns_only(t, s.p, s.q, shear_block(s, false));
  }
}

void left_multiply_inverse(ComplexMatrix& t, const Rotation& r) {
  if (r.is_identity()) return;
  if (r.real) {
    rows_only(t, r.p, r.q, real_rotation_block_adjoint(r));
  } else {
    rows_only(t, r.p, r.q, rotation_block_adjoint(r));
  }
}

void left_multiply_inverse(ComplexMatrix& t, const Shear& s) {
  if (s.is_identity()) return;
  if (s.real) {
    rows_only(t, s.p, s.q, real_shear_block(s, true));
  } else {
    rows_only(t, s.p, s.q, shear_block(s, true));
  }
}

ComplexMatrix embed(const Rotation& r, std::size_t n) {
  check_pivot(n, r.p, r.q);
  ComplexMatrix m = ComplexMatrix::identity(n);
  const Block<Complex> b = rotation_block(r);
  m(r.p, r.p) = b[0][0];
  m(r.p, r.q) = b[0][1];
  m(r.q, r.p) = b[1][0];
  m(r.q, r.q) = b[1][1];
  return m;
}

ComplexMatrix embed(const Shear& s, std::size_t n) {
  check_pivot(n, s.p, s.q);
  ComplexMatrix m = ComplexMatrix::identity(n);
  const Block<Complex> b = shear_block(s, false);
  m(s.p, s.p) = b[0][0];
  m(s.p, s.q) = b[0][1];
  m(s.q, s.p) = b[1][0];
  m(s.q, s.q) = b[1][1];
  return m;
}

}  // namespace eberlein
