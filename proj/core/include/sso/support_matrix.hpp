#pragma once

#include <cstdint>
#include <vector>

#include "sso/dense_matrix.hpp"
#include "sso/error.hpp"

namespace sso {

// Entries produced by arithmetic below this threshold are stored as empty.
inline constexpr double kValueClip = 1e-15;
// Allowed deviation of a column's squared norm from 1.
inline constexpr double kUnitColumnTol = 1e-12;

// A feasible point with orthonormal, entrywise-nonnegative columns. Such a
// matrix has at most one nonzero entry per row, so it is stored row-indexed
// as one optional (column, value) pair per row. The dense expansion X then
// satisfies X^T X = I and X >= 0.
//
// Construction is permissive: only shapes are enforced and nonnegative
// values below kValueClip are normalized to empty. validate() checks the
// feasibility invariants. Instances are immutable once built.
class SupportMatrix {
 public:
  struct Entry {
    int row;
    int col;
    double value;
  };

  // All rows empty.
  SupportMatrix(int n_rows, int n_cols);

  // Parallel per-row arrays; col < 0 marks an empty row.
  SupportMatrix(int n_rows, int n_cols, std::vector<std::int32_t> row_cols,
                std::vector<double> row_values);

  static SupportMatrix from_entries(int n_rows, int n_cols,
                                    const std::vector<Entry>& entries);

  int rows() const noexcept { return n_rows_; }
  int cols() const noexcept { return n_cols_; }

  bool has_entry(int i) const { return row_cols_[i] >= 0; }
  // Column of row i's entry, -1 when the row is empty.
  std::int32_t col(int i) const { return row_cols_[i]; }
  // Value of row i's entry, 0 when the row is empty.
  double value(int i) const { return row_cols_[i] >= 0 ? row_values_[i] : 0.0; }

  const std::vector<std::int32_t>& row_cols() const noexcept { return row_cols_; }
  const std::vector<double>& row_values() const noexcept { return row_values_; }

  int nnz() const;

 private:
  int n_rows_ = 0;
  int n_cols_ = 0;
  std::vector<std::int32_t> row_cols_;
  std::vector<double> row_values_;
};

// A support template: one optional admissible column per row, every column
// hit at least once.
class SignPattern {
 public:
  // assignment[i] in [0, n_cols) or -1 for an unconstrained (empty) row.
  SignPattern(int n_rows, int n_cols, std::vector<std::int32_t> assignment);

  static SignPattern of(const SupportMatrix& x);

  int rows() const noexcept { return n_rows_; }
  int cols() const noexcept { return n_cols_; }
  std::int32_t col(int i) const { return assignment_[i]; }
  const std::vector<std::int32_t>& assignment() const noexcept { return assignment_; }

  // Throws EmptyColumnInPattern if some column has no assigned row.
  void validate() const;

 private:
  int n_rows_ = 0;
  int n_cols_ = 0;
  std::vector<std::int32_t> assignment_;
};

// Throws on the first violated feasibility invariant: NonPositiveValue(i),
// ZeroColumn(j) or NonUnitColumn(j).
void validate(const SupportMatrix& x);

DenseMatrix to_dense(const SupportMatrix& x);

// Frobenius distance of the dense expansions, computed in O(n) by walking
// both row sequences.
double frob_dist(const SupportMatrix& x, const SupportMatrix& y);

std::vector<int> zero_rows(const SupportMatrix& x);

// Per-column row index lists, rebuilt in O(n).
std::vector<std::vector<int>> column_lists(const SupportMatrix& x);

}  // namespace sso
