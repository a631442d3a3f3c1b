#pragma once

#include <vector>

#include "sso/dense_matrix.hpp"
#include "sso/support_matrix.hpp"

namespace sso {

// Everything the fixed-support solves need at a base point Z: the gradient,
// the proximal parameter eta, and the cached matrix d = eta*Z - grad whose
// positive part (restricted to a pattern) drives the closed form.
class ProxData {
 public:
  ProxData(SupportMatrix z, DenseMatrix grad, double eta);

  const SupportMatrix& base() const noexcept { return z_; }
  const DenseMatrix& grad() const noexcept { return grad_; }
  double eta() const noexcept { return eta_; }

  // [eta*Z - grad]_{ij}
  double d(int i, int j) const { return d_(i, j); }
  const DenseMatrix& d_matrix() const noexcept { return d_; }

 private:
  SupportMatrix z_;
  DenseMatrix grad_;
  double eta_;
  DenseMatrix d_;
};

struct FixedSupportSolution {
  SupportMatrix minimizer;
  std::vector<double> alphas;  // per-column optimal linear contributions
  double linear_value;         // sum of alphas = <xbar, grad - eta*Z>
};

// Global minimizer of the proximal linearization over feasible points whose
// support is contained in the pattern s. Column j is W_{:,j}/||W_{:,j}|| for
// W = max{0, d restricted to s} when that column is nonzero, otherwise the
// unit vector at the minimal-index argmin of -d over the column's assigned
// rows. Columns whose norm underflows below kValueClip take the unit-vector
// branch as well.
FixedSupportSolution solve_fixed_support(const ProxData& pd, const SignPattern& s);

// Exact proximal linearization value f(Z) + <grad, X-Z> + eta/2 ||X-Z||^2.
double proximal_value(const ProxData& pd, const SupportMatrix& x, double f_z);

// Mutable per-column aggregates over a sign pattern: squared norms of the
// clipped d-columns, membership lists, and enough bookkeeping to evaluate
// alpha_j and move single rows between columns in O(1). Single-owner; not
// safe for concurrent mutation. The referenced ProxData must outlive the
// state.
class ColumnState {
 public:
  struct MoveDelta {
    double d_alpha_from;
    double d_alpha_to;
  };

  ColumnState(const ProxData& pd, const SignPattern& s);

  int n_cols() const noexcept { return static_cast<int>(members_.size()); }

  // Column currently holding `row`, -1 when unassigned.
  int column_of(int row) const { return row_col_[row]; }
  double sumsq(int j) const { return sumsq_[j]; }
  const std::vector<int>& members(int j) const { return members_[j]; }

  // alpha_j of the current pattern: -sqrt(sumsq) when the clipped column is
  // nonzero, else the minimal -d over assigned rows (minimal row index on
  // ties). Throws EmptyColumnInPattern when the column has no rows.
  double alpha(int j) const;
  double total_alpha() const;

  // Row index realizing the unit-vector branch of column j.
  int unit_row(int j) const;

  // Moves `row` from column `from` to column `to`, returning the change in
  // alpha_from and alpha_to. Throws RowNotInColumn if the row is not
  // currently in `from`. The prior sums are recorded so undo_last_move()
  // restores the state bit-exactly.
  MoveDelta move_row(int row, int from, int to);

  // Adds a currently unassigned row to column `to`.
  MoveDelta insert_row(int row, int to);

  // Reverts the most recent move_row/insert_row.
  void undo_last_move();

  // Permanently drops `row` from its column (no alpha report, not undoable).
  void erase_row(int row);

 private:
  struct UndoRecord {
    int row;
    int from;  // -1 for insert_row
    int to;
    double prev_sumsq_from;
    double prev_sumsq_to;
    int prev_moves_from;
    int prev_moves_to;
  };

  void detach(int row, int from);
  void attach(int row, int to);
  void bump_moves(int j);

  const ProxData* pd_;
  std::vector<int> row_col_;                // -1 when unassigned
  std::vector<int> row_pos_;                // position inside members_[col]
  std::vector<std::vector<int>> members_;   // per-column row lists
  std::vector<double> sumsq_;               // per-column sum of max{0,d}^2
  std::vector<int> moves_;                  // per-column moves since rebuild
  std::vector<UndoRecord> undo_;
};

// Full O(n) scan establishing the per-column aggregates for pattern s.
ColumnState build_column_state(const ProxData& pd, const SignPattern& s);

}  // namespace sso
