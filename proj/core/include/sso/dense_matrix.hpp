#pragma once

#include <cstddef>
#include <vector>

#include "sso/error.hpp"

namespace sso {

// Plain row-major dense matrix of doubles. Holds gradients and data; all
// sparsity-aware work happens on SupportMatrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols, double fill = 0.0);

  static DenseMatrix identity(int n);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }

  double& operator()(int i, int j) {
    return values_[static_cast<std::size_t>(i) * cols_ + j];
  }
  double operator()(int i, int j) const {
    return values_[static_cast<std::size_t>(i) * cols_ + j];
  }

  double* data() noexcept { return values_.data(); }
  const double* data() const noexcept { return values_.data(); }
  std::size_t size() const noexcept { return values_.size(); }

  bool same_shape(const DenseMatrix& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  DenseMatrix transposed() const;
  double frob_norm() const;
  double max_abs() const;
  bool all_finite() const noexcept;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> values_;
};

}  // namespace sso
