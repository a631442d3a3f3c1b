#include "sso/support_matrix.hpp"

#include <cmath>
#include <string>

namespace sso {

namespace {

void check_dims(int n_rows, int n_cols) {
  if (n_rows <= 0 || n_cols <= 0) {
    throw Error(ErrorCode::InvalidShape, "dimensions must be positive");
  }
  if (n_cols > n_rows) {
    throw Error(ErrorCode::InvalidShape,
                "need p <= n, got p=" + std::to_string(n_cols) +
                    " n=" + std::to_string(n_rows));
  }
}

}  // namespace

SupportMatrix::SupportMatrix(int n_rows, int n_cols)
    : n_rows_(n_rows),
      n_cols_(n_cols),
      row_cols_(n_rows, -1),
      row_values_(n_rows, 0.0) {
  check_dims(n_rows, n_cols);
}

SupportMatrix::SupportMatrix(int n_rows, int n_cols,
                             std::vector<std::int32_t> row_cols,
                             std::vector<double> row_values)
    : n_rows_(n_rows),
      n_cols_(n_cols),
      row_cols_(std::move(row_cols)),
      row_values_(std::move(row_values)) {
  check_dims(n_rows, n_cols);
  if (row_cols_.size() != static_cast<std::size_t>(n_rows) ||
      row_values_.size() != static_cast<std::size_t>(n_rows)) {
    throw Error(ErrorCode::InvalidShape, "row arrays must have length n");
  }
  for (int i = 0; i < n_rows_; ++i) {
    std::int32_t c = row_cols_[i];
    if (c >= n_cols_) {
      throw Error(ErrorCode::InvalidShape,
                  "column index out of range at row " + std::to_string(i), i, c);
    }
    if (c < 0) {
      row_cols_[i] = -1;
      row_values_[i] = 0.0;
      continue;
    }
    // Nonnegative dust from arithmetic becomes an empty row; negative or
    // non-finite values are kept for validate() to flag.
    double v = row_values_[i];
    if (v >= 0.0 && v < kValueClip) {
      row_cols_[i] = -1;
      row_values_[i] = 0.0;
    }
  }
}

SupportMatrix SupportMatrix::from_entries(int n_rows, int n_cols,
                                          const std::vector<Entry>& entries) {
  check_dims(n_rows, n_cols);
  std::vector<std::int32_t> cols(n_rows, -1);
  std::vector<double> values(n_rows, 0.0);
  for (const Entry& e : entries) {
    if (e.row < 0 || e.row >= n_rows) {
      throw Error(ErrorCode::InvalidShape, "row index out of range", e.row, e.col);
    }
    if (cols[e.row] >= 0) {
      throw Error(ErrorCode::InvalidShape,
                  "row " + std::to_string(e.row) + " listed twice", e.row, e.col);
    }
    cols[e.row] = e.col;
    values[e.row] = e.value;
  }
  return SupportMatrix(n_rows, n_cols, std::move(cols), std::move(values));
}

int SupportMatrix::nnz() const {
  int count = 0;
  for (std::int32_t c : row_cols_) count += (c >= 0);
  return count;
}

SignPattern::SignPattern(int n_rows, int n_cols, std::vector<std::int32_t> assignment)
    : n_rows_(n_rows), n_cols_(n_cols), assignment_(std::move(assignment)) {
  check_dims(n_rows, n_cols);
  if (assignment_.size() != static_cast<std::size_t>(n_rows)) {
    throw Error(ErrorCode::InvalidShape, "assignment must have length n");
  }
  for (int i = 0; i < n_rows_; ++i) {
    if (assignment_[i] >= n_cols_) {
      throw Error(ErrorCode::InvalidShape, "column index out of range", i,
                  assignment_[i]);
    }
    if (assignment_[i] < 0) assignment_[i] = -1;
  }
}

SignPattern SignPattern::of(const SupportMatrix& x) {
  return SignPattern(x.rows(), x.cols(), x.row_cols());
}

void SignPattern::validate() const {
  std::vector<char> seen(n_cols_, 0);
  for (std::int32_t c : assignment_) {
    if (c >= 0) seen[c] = 1;
  }
  for (int j = 0; j < n_cols_; ++j) {
    if (!seen[j]) {
      throw Error(ErrorCode::EmptyColumnInPattern,
                  "pattern column " + std::to_string(j) + " has no rows", -1, j);
    }
  }
}

void validate(const SupportMatrix& x) {
  const int n = x.rows();
  const int p = x.cols();
  for (int i = 0; i < n; ++i) {
    if (x.has_entry(i) && !(x.row_values()[i] > 0.0)) {
      throw Error(ErrorCode::NonPositiveValue,
                  "row " + std::to_string(i) + " stores a non-positive value", i,
                  x.col(i));
    }
  }
  std::vector<double> colsq(p, 0.0);
  std::vector<char> seen(p, 0);
  for (int i = 0; i < n; ++i) {
    if (!x.has_entry(i)) continue;
    int j = x.col(i);
    colsq[j] += x.value(i) * x.value(i);
    seen[j] = 1;
  }
  for (int j = 0; j < p; ++j) {
    if (!seen[j]) {
      throw Error(ErrorCode::ZeroColumn, "column " + std::to_string(j) + " is empty",
                  -1, j);
    }
    if (std::abs(colsq[j] - 1.0) > kUnitColumnTol) {
      throw Error(ErrorCode::NonUnitColumn,
                  "column " + std::to_string(j) +
                      " has squared norm " + std::to_string(colsq[j]),
                  -1, j);
    }
  }
}

DenseMatrix to_dense(const SupportMatrix& x) {
  DenseMatrix d(x.rows(), x.cols());
  for (int i = 0; i < x.rows(); ++i) {
    if (x.has_entry(i)) d(i, x.col(i)) = x.value(i);
  }
  return d;
}

double frob_dist(const SupportMatrix& x, const SupportMatrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "frob_dist shapes differ");
  }
  double s = 0.0;
  for (int i = 0; i < x.rows(); ++i) {
    const bool hx = x.has_entry(i);
    const bool hy = y.has_entry(i);
    if (hx && hy && x.col(i) == y.col(i)) {
      double d = x.value(i) - y.value(i);
      s += d * d;
    } else {
      if (hx) s += x.value(i) * x.value(i);
      if (hy) s += y.value(i) * y.value(i);
    }
  }
  return std::sqrt(s);
}

std::vector<int> zero_rows(const SupportMatrix& x) {
  std::vector<int> rows;
  for (int i = 0; i < x.rows(); ++i) {
    if (!x.has_entry(i)) rows.push_back(i);
  }
  return rows;
}

std::vector<std::vector<int>> column_lists(const SupportMatrix& x) {
  std::vector<std::vector<int>> lists(x.cols());
  for (int i = 0; i < x.rows(); ++i) {
    if (x.has_entry(i)) lists[x.col(i)].push_back(i);
  }
  return lists;
}

}  // namespace sso
