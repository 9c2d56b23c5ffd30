#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "eberlein/diagnostics.hpp"
#include "eberlein/matrix.hpp"
#include "eberlein/pivot.hpp"
#include "eberlein/transforms.hpp"

namespace eberlein {

enum class Mode { complex, real };

struct SolverOptions {
  // Stop when off(B) changes by less than this over one sweep.
  double tol_sweep = 1e-8;
  // ... or when off(B) / ||A0||_F drops below this.
  double tol_floor = 1e-14;
  // Either test only counts once the sweep also reduced ||A||_F^2 by less
  // than tol_norm * ||A0||_F^2. For n = 2 every step leaves B diagonal, so
  // the off(B) tests alone would stop before A is normal.
  double tol_norm = 1e-8;
  int max_sweeps = 100;
  Mode mode = Mode::complex;
  bool enforce_order = false;
  bool accumulate = false;
  // Record a TraceRecord after every step. Costs one O(n^3) commutator
  // evaluation per step.
  bool trace = false;

  void validate() const;
};

// Everything one step produced. The matrices are only populated when a
// step observer is installed.
struct StepReport {
  std::uint64_t k = 0;
  std::size_t sweep = 0;
  std::size_t p = 0;
  std::size_t q = 0;
  Rotation rotation;
  Shear shear;
  ShearWorkspace workspace;
  double fro_sq_before = 0.0;
  double fro_sq_after = 0.0;
  // Realized ||A^(k)||_F^2 - ||A^(k+1)||_F^2.
  double delta = 0.0;
};

struct StepMatrices {
  const ComplexMatrix& before;  // A^(k)
  const ComplexMatrix& tilde;   // R* A^(k) R
  const ComplexMatrix& after;   // A^(k+1)
};

using StepObserver = std::function<void(const StepReport&, const StepMatrices&)>;
using SweepObserver = std::function<void(std::size_t sweep, const ComplexMatrix&)>;

class SolverState {
 public:
  SolverState(ComplexMatrix a0, PivotOrdering ordering, const SolverOptions& opts);

  const ComplexMatrix& matrix() const noexcept { return a_; }
  std::uint64_t steps() const noexcept { return cursor_.step(); }
  std::size_t period() const noexcept { return cursor_.ordering().period(); }
  const PivotOrdering& ordering() const noexcept { return cursor_.ordering(); }
  const std::vector<TraceRecord>& trace() const noexcept { return trace_; }
  // Present iff accumulation was requested.
  const std::optional<ComplexMatrix>& transform() const noexcept { return t_; }
  const std::optional<ComplexMatrix>& transform_inverse() const noexcept { return tinv_; }
  const StepReport& last_step() const noexcept { return last_; }

  // ||Tinv A0 T - A^(k)||_F; requires accumulation.
  double accumulation_residual(const ComplexMatrix& a0) const;

 private:
  friend StepReport step(SolverState&, const SolverOptions&, const StepObserver&);

  ComplexMatrix a_;
  PivotCursor cursor_;
  std::optional<ComplexMatrix> t_;
  std::optional<ComplexMatrix> tinv_;
  std::vector<TraceRecord> trace_;
  StepReport last_;
};

// One Eberlein iteration at the cursor's next pivot pair.
StepReport step(SolverState& state, const SolverOptions& opts, const StepObserver& observer = {});

// ||A_before||_F^2 - ||A_after||_F^2.
double delta_achieved(const ComplexMatrix& before, const ComplexMatrix& after);

struct SolverResult {
  ComplexMatrix matrix;
  bool converged = false;
  std::size_t sweeps = 0;
  std::uint64_t steps = 0;
  // off(B) after sweep s; entry 0 is the starting value.
  std::vector<double> off_b_history;
  double off_b = 0.0;
  double norm_c = 0.0;
  double fro_a0 = 0.0;
  std::vector<TraceRecord> trace;
  std::optional<ComplexMatrix> transform;
  std::optional<ComplexMatrix> transform_inverse;
};

SolverResult run(const ComplexMatrix& a0, const PivotOrdering& ordering, const SolverOptions& opts,
                 const StepObserver& on_step = {}, const SweepObserver& on_sweep = {});

}  // namespace eberlein
