#include <cmath>
#include <numbers>

#include "doctest.h"
#include "eberlein/error.hpp"
#include "eberlein/solver.hpp"
#include "eberlein/verification.hpp"
#include "oracle.hpp"

using namespace eberlein;

namespace {

SolverOptions options(Mode mode = Mode::complex) {
  SolverOptions o;
  o.mode = mode;
  return o;
}

}  // namespace

TEST_CASE("diagonal input") {
  const std::vector<Complex> d{{3, 1}, {-2, 0}, {0.5, -4}, {1, 1}};
  const auto a = ComplexMatrix::diagonal(d);
  SolverState st(a, serial_ordering(4, SerialFamily::row), options());
  for (int k = 0; k < 6; ++k) {
    const auto rep = step(st, options());
    CHECK(rep.rotation.is_identity());
    CHECK(rep.shear.is_identity());
    CHECK(rep.delta == 0.0);
  }
  CHECK(st.matrix() == a);
  CHECK(st.steps() == 6);
  CHECK(delta_achieved(a, st.matrix()) == 0.0);

  const auto res = run(a, serial_ordering(4, SerialFamily::column), options());
  CHECK(res.converged);
  CHECK(res.sweeps == 1);
  CHECK(res.matrix == a);
  CHECK(res.off_b == 0.0);
}

TEST_CASE("first step on [[0,1],[0,0]]") {
  const ComplexMatrix a{{0, 1}, {0, 0}};
  SolverState st(a, serial_ordering(2, SerialFamily::column), options());
  ComplexMatrix before;
  ComplexMatrix tilde;
  const auto rep = step(st, options(), [&](const StepReport&, const StepMatrices& m) {
    before = m.before;
    tilde = m.tilde;
  });
  CHECK(before == a);
  CHECK(oracle::max_abs_diff(tilde, ComplexMatrix{{0.5, 0.5}, {-0.5, -0.5}}) <= 4e-16);

  const double psi = std::atanh(-0.25);
  const double delta0 = (1.0 - std::cosh(4 * psi)) - std::sinh(4 * psi);
  CHECK(delta0 > 0.0);
  const double after = oracle::fro_sq(st.matrix());
  CHECK(after == doctest::Approx(oracle::fro_sq(a) - delta0).epsilon(1e-14));
  CHECK(std::abs(delta_achieved(a, st.matrix()) - rep.shear.delta_pred) <= 1e-12);
  CHECK(rep.delta == doctest::Approx(delta0).epsilon(1e-13));
}

TEST_CASE("hermitian input reduces to complex Jacobi") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const std::size_t n = 6;
    const auto h = random_hermitian_matrix(n, seed);
    SolverState st(h, random_sg_ordering(n, seed), options());
    ComplexMatrix ref = h;
    for (int k = 0; k < 60; ++k) {
      const auto rep = step(st, options());
      CHECK(rep.shear.sinh_psi == 0.0);
      // One Jacobi rotation on the reference copy.
      const auto r = compute_rotation(ref, rep.p, rep.q);
      const auto rm = oracle::rotation(r, n);
      ref = oracle::herm(oracle::mul(oracle::mul(oracle::adj(rm), ref), rm));
      CHECK(oracle::max_abs_diff(st.matrix(), ref) <= 1e-12 * oracle::fro(h));
    }
  }
}

TEST_CASE("triangular 2x2 converges to its eigenvalues") {
  const ComplexMatrix a{{1, 1}, {0, -1}};
  for (bool order : {false, true}) {
    auto o = options();
    o.enforce_order = order;
    const auto res = run(a, serial_ordering(2, SerialFamily::column), o);
    CHECK(res.converged);
    CHECK(res.off_b < 1e-8);
    const double d0 = res.matrix(0, 0).real();
    const double d1 = res.matrix(1, 1).real();
    CHECK(std::max(d0, d1) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::min(d0, d1) == doctest::Approx(-1.0).epsilon(1e-8));
    if (order) CHECK(d0 > d1);
  }
}

TEST_CASE("normal input stays normal") {
  const std::vector<Complex> spec{{3, 1}, {-1, 2}, {0.5, -0.5}, {2, 0}, {-2, -1}, {1, 3}};
  const auto ks = known_spectrum_matrix(spec, 0.0, 5);
  const double scale = frobenius_norm_sq(ks.a);
  double worst = 0.0;
  const auto res = run(ks.a, random_sg_ordering(6, 8), options(), {},
                       [&](std::size_t, const ComplexMatrix& m) {
                         worst = std::max(worst, frobenius_norm(commutator(m)));
                       });
  CHECK(res.converged);
  CHECK(worst <= 1e-10 * scale);
  std::vector<Complex> diag;
  for (std::size_t i = 0; i < 6; ++i) diag.push_back(res.matrix(i, i));
  CHECK(matching_distance(diag, spec) <= 1e-8);
}

TEST_CASE("invariants along random runs") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const std::size_t n = 7;
    const bool real = seed % 2 == 0;
    const auto a0 = real ? random_real_matrix(n, seed) : random_complex_matrix(n, seed);
    auto o = options(real ? Mode::real : Mode::complex);
    o.accumulate = true;
    const double fro0 = frobenius_norm(a0);
    const Complex tr0 = a0.trace();
    bool monotone = true;
    bool bound = true;
    bool stays_real = true;
    bool pred = true;
    const auto res = run(
        a0, random_sg_ordering(n, 100 + seed), o,
        [&](const StepReport& rep, const StepMatrices& m) {
          const double before = std::sqrt(oracle::fro_sq(m.before));
          const double after = std::sqrt(oracle::fro_sq(m.after));
          monotone = monotone && after <= before + 1e-12 * fro0;
          const double lower = std::norm(rep.workspace.c_pq) / (3.0 * oracle::fro_sq(m.before));
          bound = bound && rep.delta >= lower - 1e-10 * fro0 * fro0;
          pred = pred && std::abs(rep.delta - rep.shear.delta_pred) <= 1e-10 * fro0 * fro0;
          if (real) stays_real = stays_real && m.after.is_real() && m.tilde.is_real();
        },
        [&](std::size_t, const ComplexMatrix& m) {
          CHECK(std::abs(m.trace() - tr0) <= 1e-10 * (1.0 + std::abs(tr0)));
        });
    CHECK(monotone);
    CHECK(bound);
    CHECK(pred);
    CHECK(stays_real);
    CHECK(res.converged);
    CHECK(res.off_b < 1e-8 * fro0);
    CHECK(res.norm_c < 1e-6 * fro0 * fro0);
    REQUIRE(res.transform.has_value());
    const auto resid = oracle::sub(oracle::mul(oracle::mul(*res.transform_inverse, a0), *res.transform),
                                   res.matrix);
    CHECK(oracle::fro(resid) <= 1e-8 * fro0);
    const auto tt = oracle::mul(*res.transform_inverse, *res.transform);
    CHECK(oracle::max_abs_diff(tt, ComplexMatrix::identity(n)) <= 1e-8);
    CHECK(res.off_b_history.size() == res.sweeps + 1);
    CHECK(res.off_b_history.front() == doctest::Approx(std::sqrt(oracle::off_sq(oracle::herm(a0)))));
  }
}

TEST_CASE("state accumulation residual") {
  const auto a0 = random_complex_matrix(5, 42);
  auto o = options();
  o.accumulate = true;
  SolverState st(a0, serial_ordering(5, SerialFamily::row), o);
  for (int k = 0; k < 40; ++k) step(st, o);
  CHECK(st.accumulation_residual(a0) <= 1e-12 * frobenius_norm(a0));
  SolverState plain(a0, serial_ordering(5, SerialFamily::row), options());
  CHECK_THROWS_AS(plain.accumulation_residual(a0), std::logic_error);
}

TEST_CASE("trace records") {
  const std::size_t n = 4;
  const auto a0 = random_complex_matrix(n, 3);
  auto o = options();
  o.trace = true;
  o.max_sweeps = 3;
  std::vector<ComplexMatrix> after;
  const auto res = run(a0, serial_ordering(n, SerialFamily::column), o,
                       [&](const StepReport&, const StepMatrices& m) { after.push_back(m.after); });
  REQUIRE(res.trace.size() == res.steps);
  REQUIRE(after.size() == res.steps);
  for (std::size_t k = 0; k < res.trace.size(); ++k) {
    const auto& r = res.trace[k];
    CHECK(r.k == k);
    CHECK(r.sweep == k / 6);
    const auto& m = after[k];
    CHECK(r.off_a == doctest::Approx(std::sqrt(oracle::off_sq(m))));
    CHECK(r.off_b == doctest::Approx(std::sqrt(oracle::off_sq(oracle::herm(m)))));
    CHECK(r.fro_a == doctest::Approx(oracle::fro(m)));
    const auto c = oracle::sub(oracle::mul(m, oracle::adj(m)), oracle::mul(oracle::adj(m), m));
    CHECK(r.norm_c == doctest::Approx(oracle::fro(c)).epsilon(1e-9));
  }
}

TEST_CASE("stopping rules") {
  const auto a0 = random_complex_matrix(8, 11);
  auto o = options();
  o.max_sweeps = 1;
  const auto res = run(a0, serial_ordering(8, SerialFamily::row), o);
  CHECK_FALSE(res.converged);
  CHECK(res.sweeps == 1);
  CHECK(res.steps == 28);

  // With a negligible sweep tolerance only the relative floor can stop the run.
  o.max_sweeps = 200;
  o.tol_sweep = 1e-300;
  o.tol_floor = 1e-10;
  const auto floor = run(a0, serial_ordering(8, SerialFamily::row), o);
  CHECK(floor.converged);
  CHECK(floor.off_b < 1e-10 * floor.fro_a0);
}

TEST_CASE("solver errors") {
  const auto a = random_complex_matrix(4, 1);
  CHECK_THROWS_AS(run(a, serial_ordering(3, SerialFamily::row), options()), DimensionError);
  CHECK_THROWS_AS(run(a, serial_ordering(4, SerialFamily::row), options(Mode::real)),
                  std::invalid_argument);
  auto bad = options();
  bad.tol_sweep = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = options();
  bad.max_sweeps = 0;
  CHECK_THROWS_AS(run(a, serial_ordering(4, SerialFamily::row), bad), std::invalid_argument);
  auto nan = a;
  nan(1, 2) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(run(nan, serial_ordering(4, SerialFamily::row), options()), NumericalError);
  PivotOrdering broken = serial_ordering(4, SerialFamily::row);
  broken.pairs[0] = broken.pairs[1];
  CHECK_THROWS_AS(run(a, broken, options()), std::invalid_argument);
}
