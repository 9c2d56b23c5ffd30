#include <cmath>
#include <numbers>

#include "doctest.h"
#include "eberlein/error.hpp"
#include "eberlein/transforms.hpp"
#include "eberlein/verification.hpp"
#include "oracle.hpp"

using namespace eberlein;

namespace {
const Complex I(0.0, 1.0);
constexpr double kPi = std::numbers::pi;

double phi_of(const Rotation& r) { return std::atan2(r.sin_phi, r.cos_phi); }
}  // namespace

TEST_CASE("compute_rotation examples") {
  SUBCASE("already annihilated") {
    const ComplexMatrix b{{3, 0}, {0, 1}};
    const auto r = compute_rotation(b, 0, 1);
    CHECK(r.alpha == 0.0);
    CHECK(r.cos_phi == 1.0);
    CHECK(r.sin_phi == 0.0);
    CHECK(apply_rotation(b, r) == b);
  }
  SUBCASE("[[0,1],[1,0]]") {
    const ComplexMatrix b{{0, 1}, {1, 0}};
    const auto r = compute_rotation(b, 0, 1);
    CHECK(r.alpha == 0.0);
    CHECK(phi_of(r) == doctest::Approx(kPi / 4).epsilon(1e-15));
    const auto out = apply_rotation(b, r);
    CHECK(oracle::max_abs_diff(out, ComplexMatrix{{1, 0}, {0, -1}}) <= 1e-15);
  }
  SUBCASE("[[2,i],[-i,2]]") {
    const ComplexMatrix b{{2, I}, {-I, 2}};
    const auto r = compute_rotation(b, 0, 1);
    CHECK(r.alpha == doctest::Approx(kPi / 2).epsilon(1e-15));
    CHECK(phi_of(r) == doctest::Approx(kPi / 4).epsilon(1e-15));
    const auto out = apply_rotation(b, r);
    CHECK(oracle::max_abs_diff(out, ComplexMatrix{{3, 0}, {0, 1}}) <= 1e-15);
  }
  SUBCASE("non-hermitian input is rejected") {
    const ComplexMatrix b{{0, 1}, {2, 0}};
    CHECK_THROWS_AS(compute_rotation(b, 0, 1), ContractViolation);
    const ComplexMatrix c{{I, 1}, {1, 0}};
    CHECK_THROWS_AS(compute_rotation(c, 0, 1), ContractViolation);
  }
  SUBCASE("bad pivot") {
    const ComplexMatrix b = ComplexMatrix::identity(3);
    CHECK_THROWS_AS(compute_rotation(b, 1, 1), DimensionError);
    CHECK_THROWS_AS(compute_rotation(b, 2, 1), DimensionError);
    CHECK_THROWS_AS(compute_rotation(b, 0, 3), DimensionError);
  }
}

TEST_CASE("compute_rotation_real examples") {
  const ComplexMatrix b{{0, 1}, {1, 0}};
  SUBCASE("identity when b_pq = 0") {
    const auto r = compute_rotation_real(ComplexMatrix{{1, 0}, {0, 2}}, 0, 1);
    CHECK(r.is_identity());
  }
  SUBCASE("[[0,1],[1,0]]") {
    const auto r = compute_rotation_real(b, 0, 1);
    CHECK(std::abs(phi_of(r)) == doctest::Approx(kPi / 4).epsilon(1e-15));
    const auto out = apply_rotation(b, r);
    CHECK(out.is_real());
    const double d0 = out(0, 0).real();
    const double d1 = out(1, 1).real();
    CHECK(std::min(d0, d1) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(std::max(d0, d1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(out(0, 1)) <= 1e-15);
  }
  SUBCASE("real block is [[c, s], [-s, c]]") {
    const auto r = compute_rotation_real(b, 0, 1);
    const auto m = embed(r, 2);
    CHECK(m == ComplexMatrix{{r.cos_phi, r.sin_phi}, {-r.sin_phi, r.cos_phi}});
  }
  SUBCASE("complex pivot entry is rejected") {
    CHECK_THROWS_AS(compute_rotation_real(ComplexMatrix{{0, I}, {-I, 0}}, 0, 1), ContractViolation);
  }
}

TEST_CASE("rotation ordering exchange") {
  const ComplexMatrix b{{0, 1}, {1, 0}};
  const auto r = compute_rotation_real(b, 0, 1, true);
  CHECK(r.exchanged);
  const auto out = apply_rotation(b, r);
  CHECK(out(0, 0).real() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(out(1, 1).real() == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(std::abs(out(0, 1)) <= 1e-15);

  // Already ordered: no exchange.
  const auto r2 = compute_rotation(b, 0, 1, true);
  CHECK_FALSE(r2.exchanged);

  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto h = random_hermitian_matrix(4, seed);
    const auto rr = compute_rotation(h, 1, 3, true);
    const auto o = apply_rotation(h, rr);
    CHECK(o(1, 1).real() >= o(3, 3).real());
    CHECK(std::abs(o(1, 3)) <= 1e-13 * frobenius_norm(h));
  }
}

TEST_CASE("rotation properties on random matrices") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const std::size_t n = 6;
    const auto a = random_complex_matrix(n, seed);
    const std::size_t p = seed % 5;
    const std::size_t q = p + 1 + (seed % (n - p - 1));
    const auto r = compute_rotation(oracle::herm(a), p, q);
    CHECK(r.cos_phi * r.cos_phi + r.sin_phi * r.sin_phi == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.cos_phi >= std::numbers::sqrt2 / 2 - 1e-14);
    CHECK(std::abs(r.sin_phi) <= r.cos_phi + 1e-15);
    CHECK(std::abs(r.phase) == doctest::Approx(1.0).epsilon(1e-15));

    const auto rm = oracle::rotation(r, n);
    const auto expect = oracle::mul(oracle::mul(oracle::adj(rm), a), rm);
    const auto got = apply_rotation(a, r);
    const double scale = oracle::fro(a);
    CHECK(oracle::max_abs_diff(got, expect) <= 1e-14 * scale);
    CHECK(std::abs(oracle::fro(got) - scale) <= 1e-13 * scale);
    CHECK(std::abs(oracle::herm(got)(p, q)) <= 1e-13 * scale);
    // Rows and columns other than p, q are untouched.
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != p && i != q && j != p && j != q) CHECK(got(i, j) == a(i, j));
    // Unitarity of the pivot block.
    const auto rr = oracle::mul(oracle::adj(rm), rm);
    CHECK(oracle::max_abs_diff(rr, ComplexMatrix::identity(n)) <= 1e-15);
  }
}

TEST_CASE("compute_shear worked example") {
  // [[0,1],[0,0]] after its annihilating rotation.
  const ComplexMatrix at{{0.5, 0.5}, {-0.5, -0.5}};
  const auto [s, ws] = compute_shear(at, 0, 1);
  CHECK(oracle::commutator_entry(at, 0, 1) == Complex(-1.0));
  CHECK(ws.c_pq == Complex(-1.0));
  CHECK(ws.g == 0.0);
  CHECK(ws.h == 0.0);
  CHECK(ws.l == Complex(0.0));
  CHECK(ws.d_tilde == Complex(1.0));
  CHECK(std::abs(ws.xi_tilde - (-I)) <= 1e-16);
  CHECK(s.beta == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(s.sinh_psi / s.cosh_psi == doctest::Approx(-0.25).epsilon(1e-15));

  const double psi = std::atanh(-0.25);
  const double expect = (1.0 - std::cosh(4 * psi)) - std::sinh(4 * psi);
  CHECK(expect > 0.0);
  CHECK(s.delta_pred == doctest::Approx(expect).epsilon(1e-14));

  const auto sm = oracle::shear(s, 2);
  const auto next = oracle::mul(oracle::mul(oracle::inverse_pivot(sm, 0, 1), at), sm);
  CHECK(oracle::fro_sq(next) == doctest::Approx(oracle::fro_sq(at) - expect).epsilon(1e-14));
  const auto got = apply_shear(at, s);
  CHECK(oracle::max_abs_diff(got, next) <= 1e-15);
}

TEST_CASE("shear degenerate cases") {
  SUBCASE("hermitian input gives the identity shear") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto h = random_hermitian_matrix(5, seed);
      const auto [s, ws] = compute_shear(h, 1, 3);
      CHECK(s.sinh_psi == 0.0);
      CHECK(s.cosh_psi == 1.0);
      CHECK(apply_shear(h, s) == h);
    }
  }
  SUBCASE("normal pivot plane skips") {
    Random rng(9);
    const auto q = random_unitary(4, rng);
    const auto [s, ws] = compute_shear(q, 0, 2);
    CHECK(ws.skipped);
    CHECK(s.is_identity());
    CHECK(apply_shear(q, s) == q);
  }
  SUBCASE("identity shear leaves A unchanged") {
    const auto a = random_complex_matrix(4, 3);
    Shear s;
    s.p = 0;
    s.q = 3;
    CHECK(apply_shear(a, s) == a);
  }
}

TEST_CASE("shear properties on random matrices") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const std::size_t n = 5;
    const auto a0 = random_complex_matrix(n, 100 + seed);
    const std::size_t p = seed % 4;
    const std::size_t q = 4;
    const auto at = apply_rotation(a0, compute_rotation(oracle::herm(a0), p, q));
    const auto [s, ws] = compute_shear(at, p, q);

    // Workspace against the defining sums.
    double g = 0.0;
    Complex l = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == p || i == q) continue;
      g += std::norm(at(i, p)) + std::norm(at(p, i)) + std::norm(at(i, q)) + std::norm(at(q, i));
      l += 2.0 * (at(p, i) * std::conj(at(q, i)) - std::conj(at(i, p)) * at(i, q));
    }
    const double scale = oracle::fro_sq(at);
    CHECK(ws.g == doctest::Approx(g).epsilon(1e-14));
    CHECK(std::abs(ws.l - l) <= 1e-13 * scale);
    CHECK(ws.d_tilde == at(p, p) - at(q, q));
    CHECK(std::abs(ws.c_pq - oracle::commutator_entry(at, p, q)) <= 1e-13 * scale);
    // tan(beta) = -Re c / Im c.
    CHECK(std::abs(std::sin(s.beta) * ws.c_pq.imag() + std::cos(s.beta) * ws.c_pq.real()) <=
          1e-12 * std::abs(ws.c_pq));

    CHECK(s.cosh_psi >= 1.0);
    CHECK(s.cosh_psi * s.cosh_psi - s.sinh_psi * s.sinh_psi == doctest::Approx(1.0).epsilon(1e-12));
    const auto sm = oracle::shear(s, n);
    const Complex det = sm(p, p) * sm(q, q) - sm(p, q) * sm(q, p);
    CHECK(std::abs(det - 1.0) <= 1e-12);
    CHECK(oracle::max_abs_diff(embed(s, n), sm) <= 1e-15);

    const auto expect = oracle::mul(oracle::mul(oracle::inverse_pivot(sm, p, q), at), sm);
    const auto got = apply_shear(at, s);
    CHECK(oracle::max_abs_diff(got, expect) <= 1e-13 * std::sqrt(scale));
    const double achieved = scale - oracle::fro_sq(got);
    CHECK(std::abs(achieved - s.delta_pred) <= 1e-10 * scale);
    CHECK(achieved >= std::norm(ws.c_pq) / (3.0 * oracle::fro_sq(a0)) - 1e-10 * scale);

    auto back = got;
    apply_shear_inverse_inplace(back, s);
    CHECK(oracle::max_abs_diff(back, at) <= 1e-12 * std::sqrt(scale));
  }
}

TEST_CASE("real variants stay real") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::size_t n = 5;
    const auto a = random_real_matrix(n, seed);
    const std::size_t p = seed % 3;
    const std::size_t q = 3 + seed % 2;
    const auto r = compute_rotation_real(oracle::herm(a), p, q);
    CHECK(r.phase == Complex(-1.0));
    const auto at = apply_rotation(a, r);
    CHECK(at.is_real());
    CHECK(std::abs(oracle::herm(at)(p, q)) <= 1e-13 * oracle::fro(a));
    CHECK(oracle::max_abs_diff(at, oracle::mul(oracle::mul(oracle::adj(oracle::rotation(r, n)), a),
                                               oracle::rotation(r, n))) <= 1e-14 * oracle::fro(a));

    const auto [s, ws] = compute_shear(at, p, q, true);
    CHECK(s.beta == kPi / 2);
    CHECK(ws.c_pq.imag() == 0.0);
    const double e = (at(p, q) - at(q, p)).real();
    const double d = (at(p, p) - at(q, q)).real();
    CHECK(ws.e_tilde == e);
    CHECK(s.sinh_psi / s.cosh_psi ==
          doctest::Approx(ws.c_pq.real() / (ws.g + 2.0 * (e * e + d * d))).epsilon(1e-14));
    // The general formula evaluated at beta = pi/2 agrees with the real one.
    const double num = 0.5 * (2.0 * (-e * d) + ws.l.real());
    CHECK(s.sinh_psi / s.cosh_psi ==
          doctest::Approx(num / (ws.g + 2.0 * (e * e + d * d))).epsilon(1e-12));

    const auto next = apply_shear(at, s);
    CHECK(next.is_real());
    const double scale = oracle::fro_sq(at);
    CHECK(std::abs(scale - oracle::fro_sq(next) - s.delta_pred) <= 1e-10 * scale);
  }
}

TEST_CASE("accumulation helpers") {
  const std::size_t n = 4;
  const auto t0 = random_complex_matrix(n, 77);
  const auto a = random_complex_matrix(n, 78);
  const auto r = compute_rotation(oracle::herm(a), 1, 2);
  const auto s = compute_shear(apply_rotation(a, r), 1, 2).shear;
  REQUIRE_FALSE(s.is_identity());

  auto t = t0;
  right_multiply(t, r);
  CHECK(oracle::max_abs_diff(t, oracle::mul(t0, oracle::rotation(r, n))) <= 1e-14);
  t = t0;
  right_multiply(t, s);
  CHECK(oracle::max_abs_diff(t, oracle::mul(t0, oracle::shear(s, n))) <= 1e-14);
  t = t0;
  left_multiply_inverse(t, r);
  CHECK(oracle::max_abs_diff(t, oracle::mul(oracle::adj(oracle::rotation(r, n)), t0)) <= 1e-14);
  t = t0;
  left_multiply_inverse(t, s);
  CHECK(oracle::max_abs_diff(t, oracle::mul(oracle::inverse_pivot(oracle::shear(s, n), 1, 2), t0)) <=
        1e-13);
  CHECK(oracle::max_abs_diff(embed(r, n), oracle::rotation(r, n)) == 0.0);
}
