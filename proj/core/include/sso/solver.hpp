#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "sso/objectives.hpp"
#include "sso/stationarity.hpp"
#include "sso/subproblem.hpp"
#include "sso/support_matrix.hpp"

namespace sso {

struct SolverOptions {
  double delta = 0.1;    // small-row threshold in (0, 1)
  double theta = 1e-2;   // keep-support gate on ||Y_k - X_k||_F
  double tol = 1e-6;     // step-norm stopping tolerance
  int max_iters = 1000;
  double eta0 = 1.0;     // proximal parameter at iteration 0
  double eta_min = 1e-10;
  double eta_max = 1e10;
  // When set, eta stays constant and the BB update is disabled.
  std::optional<double> fixed_eta;
  // Consumed by initialization helpers only; the solve itself is
  // deterministic.
  std::optional<std::uint64_t> seed;
  // Diagnostic hook, called once per iteration with (k, x_next, y).
  std::function<void(int, const SupportMatrix&, const SupportMatrix&)> iterate_observer;
};

enum class Branch { kKeptSupport, kRelocation };

struct TraceRecord {
  int k;
  double f_value;  // f(X_k) at the start of the iteration
  double step_y;   // ||Y_k - X_k||_F
  double step_x;   // ||X_{k+1} - Y_k||_F
  double eta;
  Branch branch;
  int r_k;              // rows swept, 0 on the kept-support branch
  int support_changes;  // rows whose column changed from X_k to X_{k+1}
};

struct SolveTrace {
  std::vector<TraceRecord> records;
};

enum class SolveStatus { kConverged, kMaxIters };

struct SolveResult {
  SupportMatrix x_final;
  double f_final;
  int iterations;
  SolveStatus status;
  SolveTrace trace;
  ResidualReport residuals;
};

// Pattern that keeps every nonzero row of x in place and assigns each zero
// row to the minimal column index attaining the smallest gradient entry of
// that row.
SignPattern build_zero_row_sign(const SupportMatrix& x, const DenseMatrix& grad);

// One fixed-support proximal solve at x with the zero-row-refined pattern;
// returns the intermediate iterate and its objective value.
std::pair<SupportMatrix, double> zero_row_step(const Objective& obj,
                                               const SupportMatrix& x, double eta);
SupportMatrix zero_row_step_with_gradient(const SupportMatrix& x,
                                          const DenseMatrix& grad, double eta);

struct SmallRows {
  double delta_k;
  std::vector<int> rows;  // ascending row order
};

// Rows whose nonzero entry does not exceed delta_k = max(delta, smallest
// nonzero value of y); zero rows are excluded. Throws AllRowsZero if y has
// no entries.
SmallRows small_rows(const SupportMatrix& y, double delta);

// Sequential relocation sweep over the small rows of y: for each such row,
// tries every target column via the incremental ColumnState, keeps the
// minimal-index column with the lowest proximal-model value, and returns
// the final iterate.
SupportMatrix relocation_step(const Objective& obj, const SupportMatrix& y,
                              double f_y, const DenseMatrix& grad_y, double eta,
                              double delta);

// |<dX, dG>| / ||dX||_F^2 clamped into [eta_min, eta_max]; returns eta_prev
// when dX = 0 or the ratio is not finite.
double bb_stepsize(const SupportMatrix& x_prev, const SupportMatrix& x_curr,
                   const DenseMatrix& g_prev, const DenseMatrix& g_curr,
                   double eta_prev, double eta_min, double eta_max);

SolveResult solve(const Objective& obj, const SupportMatrix& x0,
                  const SolverOptions& opts = {});

}  // namespace sso
