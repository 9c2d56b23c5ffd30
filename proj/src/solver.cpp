#include "eberlein/solver.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "eberlein/error.hpp"

namespace eberlein {
namespace {

bool pivot_lines_finite(const ComplexMatrix& a, std::size_t p, std::size_t q) {
  auto ok = [](const Complex& x) { return std::isfinite(x.real()) && std::isfinite(x.imag()); };
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!ok(a(i, p)) || !ok(a(i, q)) || !ok(a(p, i)) || !ok(a(q, i))) return false;
  }
  return true;
}

// Hermitian pivot block of A as a 2x2 matrix.
ComplexMatrix pivot_block(const ComplexMatrix& a, std::size_t p, std::size_t q) {
  ComplexMatrix b(2);
  b(0, 0) = a(p, p).real();
  b(1, 1) = a(q, q).real();
  b(0, 1) = 0.5 * (a(p, q) + std::conj(a(q, p)));
  b(1, 0) = std::conj(b(0, 1));
  return b;
}

}  // namespace

void SolverOptions::validate() const {
  if (!(tol_sweep > 0.0)) throw std::invalid_argument("tol_sweep must be positive");
  if (!(tol_floor > 0.0)) throw std::invalid_argument("tol_floor must be positive");
  if (!(tol_norm > 0.0)) throw std::invalid_argument("tol_norm must be positive");
  if (max_sweeps < 1) throw std::invalid_argument("max_sweeps must be at least 1");
}

SolverState::SolverState(ComplexMatrix a0, PivotOrdering ordering, const SolverOptions& opts)
    : a_(std::move(a0)), cursor_(std::move(ordering)) {
  opts.validate();
  const std::size_t n = a_.size();
  if (n < 2) throw DimensionError("solver needs n >= 2");
  if (cursor_.ordering().n != n) {
    throw DimensionError("ordering is for n = " + std::to_string(cursor_.ordering().n) +
                         " but the matrix has n = " + std::to_string(n));
  }
  const ValidationReport report = validate_ordering(cursor_.ordering());
  if (!report.ok) throw std::invalid_argument("invalid pivot ordering: " + report.message());
  if (!a_.all_finite()) throw NumericalError("starting matrix has non-finite entries");
  if (opts.mode == Mode::real && !a_.is_real())
    throw std::invalid_argument("real mode requires a real starting matrix");
  if (opts.accumulate) {
    t_ = ComplexMatrix::identity(n);
    tinv_ = ComplexMatrix::identity(n);
  }
}

double SolverState::accumulation_residual(const ComplexMatrix& a0) const {
  if (!t_ || !tinv_) throw std::logic_error("transformations were not accumulated");
  return frobenius_norm(*tinv_ * a0 * *t_ - a_);
}

StepReport step(SolverState& st, const SolverOptions& opts, const StepObserver& observer) {
  StepReport rep;
  const auto [p, q] = st.cursor_.next();
  rep.k = st.cursor_.step() - 1;
  rep.sweep = static_cast<std::size_t>(rep.k / st.period());
  rep.p = p;
  rep.q = q;
  const bool real_mode = opts.mode == Mode::real;
  ComplexMatrix& a = st.a_;

  std::optional<ComplexMatrix> before;
  std::optional<ComplexMatrix> tilde;
  if (observer) before = a;
  rep.fro_sq_before = frobenius_norm_sq(a);

  const ComplexMatrix block = pivot_block(a, p, q);
  rep.rotation = real_mode ? compute_rotation_real(block, 0, 1, opts.enforce_order)
                           : compute_rotation(block, 0, 1, opts.enforce_order);
  rep.rotation.p = p;
  rep.rotation.q = q;
  apply_rotation_inplace(a, rep.rotation);
  if (observer) tilde = a;

  ShearResult sr = compute_shear(a, p, q, real_mode);
  rep.shear = sr.shear;
  rep.workspace = sr.workspace;
  apply_shear_inplace(a, rep.shear);

  if (!pivot_lines_finite(a, p, q)) {
    throw NumericalError("non-finite iterate after step " + std::to_string(rep.k) + " at pivot (" +
                         std::to_string(p + 1) + ", " + std::to_string(q + 1) + ")");
  }
  if (st.t_) {
    right_multiply(*st.t_, rep.rotation);
    right_multiply(*st.t_, rep.shear);
    left_multiply_inverse(*st.tinv_, rep.rotation);
    left_multiply_inverse(*st.tinv_, rep.shear);
  }

  rep.fro_sq_after = frobenius_norm_sq(a);
  rep.delta = rep.fro_sq_before - rep.fro_sq_after;

  if (opts.trace) {
    TraceRecord r;
    r.k = rep.k;
    r.sweep = rep.sweep;
    r.p = p;
    r.q = q;
    r.off_a = off_norm(a);
    r.off_b = hermitian_off_norm(a);
    r.norm_c = frobenius_norm(commutator(a));
    r.fro_a = std::sqrt(rep.fro_sq_after);
    r.delta_k = rep.delta;
    r.c_pq_abs = std::abs(rep.workspace.c_pq);
    st.trace_.push_back(r);
  }
  st.last_ = rep;
  if (observer) observer(rep, StepMatrices{*before, *tilde, a});
  return rep;
}

double delta_achieved(const ComplexMatrix& before, const ComplexMatrix& after) {
  return frobenius_norm_sq(before) - frobenius_norm_sq(after);
}

SolverResult run(const ComplexMatrix& a0, const PivotOrdering& ordering, const SolverOptions& opts,
                 const StepObserver& on_step, const SweepObserver& on_sweep) {
  SolverState st(a0, ordering, opts);
  SolverResult res;
  res.fro_a0 = frobenius_norm(a0);
  double prev = hermitian_off_norm(a0);
  res.off_b_history.push_back(prev);
  if (on_sweep) on_sweep(0, st.matrix());

  const std::size_t period = st.period();
  const double fro_sq_a0 = res.fro_a0 * res.fro_a0;
  double fro_sq = fro_sq_a0;
  for (int s = 1; s <= opts.max_sweeps; ++s) {
    for (std::size_t k = 0; k < period; ++k) step(st, opts, on_step);
    const double fro_sq_next = frobenius_norm_sq(st.matrix());
    const bool settled = fro_sq - fro_sq_next < opts.tol_norm * fro_sq_a0;
    fro_sq = fro_sq_next;
    const double off_b = hermitian_off_norm(st.matrix());
    res.off_b_history.push_back(off_b);
    res.sweeps = static_cast<std::size_t>(s);
    if (on_sweep) on_sweep(res.sweeps, st.matrix());
    if (settled &&
        (std::abs(off_b - prev) < opts.tol_sweep || off_b < opts.tol_floor * res.fro_a0)) {
      res.converged = true;
      break;
    }
    prev = off_b;
  }

  res.matrix = st.matrix();
  res.steps = st.steps();
  res.off_b = res.off_b_history.back();
  res.norm_c = frobenius_norm(commutator(res.matrix));
  res.trace = st.trace();
  res.transform = st.transform();
  res.transform_inverse = st.transform_inverse();
  return res;
}

}  // namespace eberlein
