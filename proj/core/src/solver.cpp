#include "sso/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace sso {

SignPattern build_zero_row_sign(const SupportMatrix& x, const DenseMatrix& grad) {
  if (grad.rows() != x.rows() || grad.cols() != x.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "gradient shape does not match point");
  }
  std::vector<std::int32_t> assign = x.row_cols();
  for (int i = 0; i < x.rows(); ++i) {
    if (assign[i] >= 0) continue;
    int bj = 0;
    double best = grad(i, 0);
    for (int j = 1; j < x.cols(); ++j) {
      if (grad(i, j) < best) {
        best = grad(i, j);
        bj = j;
      }
    }
    assign[i] = bj;
  }
  return SignPattern(x.rows(), x.cols(), std::move(assign));
}

SupportMatrix zero_row_step_with_gradient(const SupportMatrix& x,
                                          const DenseMatrix& grad, double eta) {
  ProxData pd(x, grad, eta);
  return solve_fixed_support(pd, build_zero_row_sign(x, grad)).minimizer;
}

std::pair<SupportMatrix, double> zero_row_step(const Objective& obj,
                                               const SupportMatrix& x, double eta) {
  DenseMatrix grad = obj.euclidean_gradient(x);
  SupportMatrix y = zero_row_step_with_gradient(x, grad, eta);
  const double f_y = obj.value(y);
  return {std::move(y), f_y};
}

SmallRows small_rows(const SupportMatrix& y, double delta) {
  double smallest = std::numeric_limits<double>::infinity();
  for (int i = 0; i < y.rows(); ++i) {
    if (y.has_entry(i)) smallest = std::min(smallest, y.value(i));
  }
  if (!std::isfinite(smallest)) {
    throw Error(ErrorCode::AllRowsZero, "point has no nonzero entries");
  }
  SmallRows out;
  out.delta_k = std::max(delta, smallest);
  for (int i = 0; i < y.rows(); ++i) {
    if (y.has_entry(i) && y.value(i) <= out.delta_k) out.rows.push_back(i);
  }
  return out;
}

SupportMatrix relocation_step(const Objective& obj, const SupportMatrix& y,
                              double f_y, const DenseMatrix& grad_y, double eta,
                              double delta) {
  (void)obj;
  (void)f_y;
  const int n = y.rows();
  const int p = y.cols();
  ProxData pd(y, grad_y, eta);

  // Zero rows of y are assigned once, up front, to the minimal-index column
  // with the smallest gradient entry; they keep that slot for the whole
  // sweep even if a candidate solve clips them back to zero.
  std::vector<std::int32_t> assign = y.row_cols();
  std::vector<char> pinned(n, 0);
  for (int i = 0; i < n; ++i) {
    if (assign[i] >= 0) continue;
    pinned[i] = 1;
    int bj = 0;
    double best = grad_y(i, 0);
    for (int j = 1; j < p; ++j) {
      if (grad_y(i, j) < best) {
        best = grad_y(i, j);
        bj = j;
      }
    }
    assign[i] = bj;
  }
  ColumnState cs(pd, SignPattern(n, p, std::move(assign)));

  const SmallRows sr = small_rows(y, delta);

  // Working view of the current iterate; kept in lockstep with the pattern,
  // which mirrors its signs plus the pinned rows.
  std::vector<std::int32_t> cur_cols = y.row_cols();
  std::vector<double> cur_vals = y.row_values();
  for (int i = 0; i < n; ++i) {
    if (cur_cols[i] < 0) cur_vals[i] = 0.0;
  }

  // Writes the closed-form output of column j into the working view and
  // drops non-pinned rows the solve clipped to zero.
  auto rematerialize_column = [&](int j) {
    const std::vector<int> mem = cs.members(j);
    for (int i : mem) {
      if (cur_cols[i] == j) {
        cur_cols[i] = -1;
        cur_vals[i] = 0.0;
      }
    }
    const double norm = std::sqrt(cs.sumsq(j));
    if (norm >= kValueClip) {
      int npos = 0;
      for (int i : mem) npos += (pd.d(i, j) > 0.0);
      for (int i : mem) {
        const double w = pd.d(i, j);
        const double val = (w > 0.0) ? (npos == 1 ? 1.0 : w / norm) : 0.0;
        if (val >= kValueClip) {
          cur_cols[i] = j;
          cur_vals[i] = val;
        } else if (!pinned[i]) {
          cs.erase_row(i);
        }
      }
    } else {
      const int ir = cs.unit_row(j);
      for (int i : mem) {
        if (i == ir) {
          cur_cols[i] = j;
          cur_vals[i] = 1.0;
        } else if (!pinned[i]) {
          cs.erase_row(i);
        }
      }
    }
  };

  bool committed = false;

  for (int u : sr.rows) {
    const bool have = cur_cols[u] >= 0;
    // Relocating an entry equal to 1 would leave its column empty.
    if (have && cur_vals[u] == 1.0) continue;

    const int state_col = cs.column_of(u);
    const double base_sum = cs.total_alpha();

    double best_val = std::numeric_limits<double>::infinity();
    int best_v = -1;
    for (int v = 0; v < p; ++v) {
      double cand;
      if (state_col >= 0 && v == state_col) {
        cand = base_sum;
      } else {
        const ColumnState::MoveDelta dl = (state_col >= 0)
                                              ? cs.move_row(u, state_col, v)
                                              : cs.insert_row(u, v);
        cand = base_sum + dl.d_alpha_from + dl.d_alpha_to;
        cs.undo_last_move();
      }
      if (cand < best_val) {
        best_val = cand;
        best_v = v;
      }
    }

    if (state_col >= 0) {
      if (best_v != state_col) cs.move_row(u, state_col, best_v);
    } else {
      cs.insert_row(u, best_v);
    }

    if (!committed) {
      // First accepted solve of the sweep: every column is re-solved at the
      // new base point, not only the two touched by the move.
      std::fill(cur_cols.begin(), cur_cols.end(), -1);
      std::fill(cur_vals.begin(), cur_vals.end(), 0.0);
      for (int j = 0; j < p; ++j) rematerialize_column(j);
      committed = true;
    } else if (state_col < 0) {
      rematerialize_column(best_v);
    } else if (best_v != state_col) {
      cur_cols[u] = -1;
      cur_vals[u] = 0.0;
      rematerialize_column(state_col);
      rematerialize_column(best_v);
    }
    // best_v == state_col with a solve already materialized: the pattern is
    // unchanged, so the solve output is too.
  }

  return SupportMatrix(n, p, std::move(cur_cols), std::move(cur_vals));
}

double bb_stepsize(const SupportMatrix& x_prev, const SupportMatrix& x_curr,
                   const DenseMatrix& g_prev, const DenseMatrix& g_curr,
                   double eta_prev, double eta_min, double eta_max) {
  if (x_prev.rows() != x_curr.rows() || x_prev.cols() != x_curr.cols() ||
      !g_prev.same_shape(g_curr) || g_curr.rows() != x_curr.rows() ||
      g_curr.cols() != x_curr.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "stepsize inputs disagree in shape");
  }
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < x_curr.rows(); ++i) {
    const bool hc = x_curr.has_entry(i);
    const bool hp = x_prev.has_entry(i);
    if (hc) {
      const int j = x_curr.col(i);
      num += x_curr.value(i) * (g_curr(i, j) - g_prev(i, j));
    }
    if (hp) {
      const int j = x_prev.col(i);
      num -= x_prev.value(i) * (g_curr(i, j) - g_prev(i, j));
    }
    if (hc && hp && x_curr.col(i) == x_prev.col(i)) {
      const double d = x_curr.value(i) - x_prev.value(i);
      den += d * d;
    } else {
      if (hc) den += x_curr.value(i) * x_curr.value(i);
      if (hp) den += x_prev.value(i) * x_prev.value(i);
    }
  }
  if (den == 0.0) return eta_prev;
  const double ratio = std::abs(num) / den;
  if (!std::isfinite(ratio)) return eta_prev;
  return std::clamp(ratio, eta_min, eta_max);
}

namespace {

int count_support_changes(const SupportMatrix& a, const SupportMatrix& b) {
  int changes = 0;
  for (int i = 0; i < a.rows(); ++i) {
    if (a.col(i) != b.col(i)) ++changes;
  }
  return changes;
}

}  // namespace

SolveResult solve(const Objective& obj, const SupportMatrix& x0,
                  const SolverOptions& opts) {
  if (!(opts.delta > 0.0 && opts.delta < 1.0)) {
    throw Error(ErrorCode::InvalidOptions, "delta must lie in (0, 1)");
  }
  if (!(opts.theta > 0.0) || !(opts.tol >= 0.0) || opts.max_iters < 0) {
    throw Error(ErrorCode::InvalidOptions, "invalid solver options");
  }
  if (!(opts.eta_min <= opts.eta0 && opts.eta0 <= opts.eta_max) ||
      !(opts.eta_min > 0.0)) {
    throw Error(ErrorCode::InvalidOptions, "eta bounds must satisfy 0 < min <= eta0 <= max");
  }
  if (opts.fixed_eta && !(*opts.fixed_eta > 0.0)) {
    throw Error(ErrorCode::InvalidOptions, "fixed eta must be positive");
  }
  if (x0.rows() != obj.rows() || x0.cols() != obj.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "initial point shape does not match objective");
  }
  try {
    validate(x0);
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidInitialPoint,
                std::string("initial point infeasible: ") + e.what());
  }

  SupportMatrix x = x0;
  double f_x = obj.value(x);
  DenseMatrix g = obj.euclidean_gradient(x);
  double eta_prev = opts.fixed_eta.value_or(opts.eta0);

  std::optional<SupportMatrix> x_last;
  std::optional<DenseMatrix> g_last;

  SolveTrace trace;
  SolveStatus status = SolveStatus::kMaxIters;
  int iterations = 0;

  for (int k = 0; k < opts.max_iters; ++k) {
    double eta;
    if (opts.fixed_eta) {
      eta = *opts.fixed_eta;
    } else if (k == 0) {
      eta = opts.eta0;
    } else {
      eta = bb_stepsize(*x_last, x, *g_last, g, eta_prev, opts.eta_min, opts.eta_max);
    }

    SupportMatrix y = zero_row_step_with_gradient(x, g, eta);
    const double step_y = frob_dist(y, x);

    Branch branch = Branch::kKeptSupport;
    int r_k = 0;
    SupportMatrix x_next = y;
    if (step_y < opts.theta) {
      branch = Branch::kRelocation;
      const DenseMatrix g_y = obj.euclidean_gradient(y);
      const double f_y = obj.value(y);
      r_k = static_cast<int>(small_rows(y, opts.delta).rows.size());
      x_next = relocation_step(obj, y, f_y, g_y, eta, opts.delta);
    }

    const double step_x = frob_dist(x_next, y);
    const double step_total = frob_dist(x_next, x);
    trace.records.push_back({k, f_x, step_y, step_x, eta, branch, r_k,
                             count_support_changes(x, x_next)});
    iterations = k + 1;

    if (opts.iterate_observer) opts.iterate_observer(k, x_next, y);

    x_last = std::move(x);
    g_last = std::move(g);
    x = std::move(x_next);
    f_x = obj.value(x);
    g = obj.euclidean_gradient(x);
    eta_prev = eta;

    if (step_total <= opts.tol) {
      status = SolveStatus::kConverged;
      break;
    }
  }

  ResidualReport rr = residuals_from_gradient(x, g);
  return SolveResult{std::move(x), f_x, iterations, status, std::move(trace), rr};
}

}  // namespace sso
