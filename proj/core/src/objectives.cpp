#include "sso/objectives.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace sso {

namespace {

using EigenRowMajor =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const EigenRowMajor>;
using MutMap = Eigen::Map<EigenRowMajor>;

ConstMap map_of(const DenseMatrix& m) { return ConstMap(m.data(), m.rows(), m.cols()); }
MutMap map_of(DenseMatrix& m) { return MutMap(m.data(), m.rows(), m.cols()); }

// p x m matrix X^T A gathered from the support of x in O(n m).
DenseMatrix gather_xt_a(const SupportMatrix& x, const DenseMatrix& a) {
  DenseMatrix xta(x.cols(), a.cols());
  for (int i = 0; i < x.rows(); ++i) {
    if (!x.has_entry(i)) continue;
    const int j = x.col(i);
    const double v = x.value(i);
    for (int r = 0; r < a.cols(); ++r) xta(j, r) += v * a(i, r);
  }
  return xta;
}

}  // namespace

void Objective::check_shape(int n, int p) const {
  if (n != rows() || p != cols()) {
    throw Error(ErrorCode::ShapeMismatch,
                "objective expects " + std::to_string(rows()) + "x" +
                    std::to_string(cols()) + ", got " + std::to_string(n) + "x" +
                    std::to_string(p));
  }
}

NpcaObjective::NpcaObjective(DenseMatrix a, int p) : a_(std::move(a)), p_(p) {
  if (p_ <= 0 || a_.rows() <= p_) {
    throw Error(ErrorCode::InvalidShape, "need m > p for the data matrix");
  }
  if (a_.cols() < a_.rows()) {
    throw Error(ErrorCode::InvalidShape, "need m <= n for the data matrix");
  }
}

double NpcaObjective::value(const SupportMatrix& x) const {
  check_shape(x.rows(), x.cols());
  const int m = a_.rows();
  DenseMatrix ax(m, p_);
  for (int r = 0; r < m; ++r) {
    for (int i = 0; i < a_.cols(); ++i) {
      if (x.has_entry(i)) ax(r, x.col(i)) += x.value(i) * a_(r, i);
    }
  }
  double s = 0.0;
  for (std::size_t k = 0; k < ax.size(); ++k) s += ax.data()[k] * ax.data()[k];
  return -0.5 * s;
}

double NpcaObjective::value_dense(const DenseMatrix& x) const {
  check_shape(x.rows(), x.cols());
  EigenRowMajor ax = map_of(a_) * map_of(x);
  return -0.5 * ax.squaredNorm();
}

DenseMatrix NpcaObjective::euclidean_gradient(const SupportMatrix& x) const {
  check_shape(x.rows(), x.cols());
  const int m = a_.rows();
  DenseMatrix ax(m, p_);
  for (int r = 0; r < m; ++r) {
    for (int i = 0; i < a_.cols(); ++i) {
      if (x.has_entry(i)) ax(r, x.col(i)) += x.value(i) * a_(r, i);
    }
  }
  DenseMatrix g(rows(), p_);
  map_of(g) = -(map_of(a_).transpose() * map_of(ax));
  return g;
}

OnmfObjective::OnmfObjective(DenseMatrix a, int p, bool precompute_gram)
    : a_(std::move(a)), p_(p), precomputed_(precompute_gram) {
  if (p_ <= 0 || p_ >= a_.rows()) {
    throw Error(ErrorCode::InvalidShape, "need p < n for the data matrix");
  }
  if (precomputed_) {
    gram_ = DenseMatrix(a_.rows(), a_.rows());
    map_of(gram_) = map_of(a_) * map_of(a_).transpose();
  }
}

double OnmfObjective::value(const SupportMatrix& x) const {
  check_shape(x.rows(), x.cols());
  DenseMatrix xta = gather_xt_a(x, a_);
  const int m = a_.cols();
  double s = 0.0;
  for (int i = 0; i < a_.rows(); ++i) {
    if (x.has_entry(i)) {
      const int j = x.col(i);
      const double v = x.value(i);
      for (int r = 0; r < m; ++r) {
        double d = a_(i, r) - v * xta(j, r);
        s += d * d;
      }
    } else {
      for (int r = 0; r < m; ++r) s += a_(i, r) * a_(i, r);
    }
  }
  return 0.5 * s;
}

double OnmfObjective::value_dense(const DenseMatrix& x) const {
  check_shape(x.rows(), x.cols());
  EigenRowMajor xta = map_of(x).transpose() * map_of(a_);
  EigenRowMajor r = map_of(a_) - map_of(x) * xta;
  return 0.5 * r.squaredNorm();
}

DenseMatrix OnmfObjective::euclidean_gradient(const SupportMatrix& x) const {
  check_shape(x.rows(), x.cols());
  const int n = rows();
  // BX = A (A^T X) with the inner product gathered from the support, or
  // B X directly when the Gram matrix is cached.
  DenseMatrix xd = to_dense(x);
  DenseMatrix bx(n, p_);
  if (precomputed_) {
    map_of(bx) = map_of(gram_) * map_of(xd);
  } else {
    DenseMatrix atx = gather_xt_a(x, a_).transposed();  // m x p
    map_of(bx) = map_of(a_) * map_of(atx);
  }
  // X^T X from the support: off-diagonals vanish structurally.
  DenseMatrix xtx(p_, p_);
  for (int i = 0; i < n; ++i) {
    if (x.has_entry(i)) xtx(x.col(i), x.col(i)) += x.value(i) * x.value(i);
  }
  // X^T B X gathered row-wise.
  DenseMatrix xtbx(p_, p_);
  for (int i = 0; i < n; ++i) {
    if (!x.has_entry(i)) continue;
    const int j = x.col(i);
    const double v = x.value(i);
    for (int c = 0; c < p_; ++c) xtbx(j, c) += v * bx(i, c);
  }
  DenseMatrix g(n, p_);
  map_of(g) = -2.0 * map_of(bx) + map_of(bx) * map_of(xtx) + map_of(xd) * map_of(xtbx);
  return g;
}

CommunityObjective::CommunityObjective(DenseMatrix a, int p)
    : a_(std::move(a)), p_(p) {
  if (a_.rows() != a_.cols()) {
    throw Error(ErrorCode::InvalidShape, "community matrix must be square");
  }
  if (p_ <= 0 || p_ >= a_.rows()) {
    throw Error(ErrorCode::InvalidShape, "need p < n for the data matrix");
  }
  const double scale = std::max(1.0, a_.max_abs());
  for (int i = 0; i < a_.rows(); ++i) {
    for (int j = i + 1; j < a_.cols(); ++j) {
      if (std::abs(a_(i, j) - a_(j, i)) > 1e-10 * scale) {
        throw Error(ErrorCode::ShapeMismatch, "community matrix must be symmetric",
                    i, j);
      }
    }
  }
}

double CommunityObjective::value(const SupportMatrix& x) const {
  check_shape(x.rows(), x.cols());
  const int n = rows();
  DenseMatrix ax(n, p_);
  for (int r = 0; r < n; ++r) {
    for (int i = 0; i < n; ++i) {
      if (x.has_entry(i)) ax(r, x.col(i)) += x.value(i) * a_(r, i);
    }
  }
  DenseMatrix m(p_, p_);
  for (int i = 0; i < n; ++i) {
    if (!x.has_entry(i)) continue;
    const int j = x.col(i);
    const double v = x.value(i);
    for (int c = 0; c < p_; ++c) m(j, c) += v * ax(i, c);
  }
  double s = 0.0;
  for (std::size_t k = 0; k < m.size(); ++k) s += m.data()[k] * m.data()[k];
  return -0.25 * s;
}

double CommunityObjective::value_dense(const DenseMatrix& x) const {
  check_shape(x.rows(), x.cols());
  EigenRowMajor m = map_of(x).transpose() * (map_of(a_) * map_of(x));
  return -0.25 * m.squaredNorm();
}

DenseMatrix CommunityObjective::euclidean_gradient(const SupportMatrix& x) const {
  check_shape(x.rows(), x.cols());
  const int n = rows();
  DenseMatrix ax(n, p_);
  for (int r = 0; r < n; ++r) {
    for (int i = 0; i < n; ++i) {
      if (x.has_entry(i)) ax(r, x.col(i)) += x.value(i) * a_(r, i);
    }
  }
  DenseMatrix m(p_, p_);
  for (int i = 0; i < n; ++i) {
    if (!x.has_entry(i)) continue;
    const int j = x.col(i);
    const double v = x.value(i);
    for (int c = 0; c < p_; ++c) m(j, c) += v * ax(i, c);
  }
  DenseMatrix g(n, p_);
  map_of(g) = -(map_of(ax) * map_of(m));
  return g;
}

LinearObjective::LinearObjective(DenseMatrix c) : c_(std::move(c)) {
  if (c_.rows() <= c_.cols() || c_.cols() <= 0) {
    throw Error(ErrorCode::InvalidShape, "need p < n for the coefficient matrix");
  }
}

double LinearObjective::value(const SupportMatrix& x) const {
  check_shape(x.rows(), x.cols());
  double s = 0.0;
  for (int i = 0; i < x.rows(); ++i) {
    if (x.has_entry(i)) s += x.value(i) * c_(i, x.col(i));
  }
  return s;
}

double LinearObjective::value_dense(const DenseMatrix& x) const {
  check_shape(x.rows(), x.cols());
  double s = 0.0;
  for (std::size_t k = 0; k < c_.size(); ++k) s += c_.data()[k] * x.data()[k];
  return s;
}

DenseMatrix LinearObjective::euclidean_gradient(const SupportMatrix& x) const {
  check_shape(x.rows(), x.cols());
  return c_;
}

double fd_gradient_check(const Objective& obj, const SupportMatrix& x, double h) {
  if (!(h > 0.0)) {
    throw Error(ErrorCode::InvalidOptions, "finite-difference step must be positive");
  }
  DenseMatrix base = to_dense(x);
  DenseMatrix g = obj.euclidean_gradient(x);
  double worst = 0.0;
  for (int i = 0; i < base.rows(); ++i) {
    for (int j = 0; j < base.cols(); ++j) {
      const double saved = base(i, j);
      base(i, j) = saved + h;
      const double fp = obj.value_dense(base);
      base(i, j) = saved - h;
      const double fm = obj.value_dense(base);
      base(i, j) = saved;
      const double fd = (fp - fm) / (2.0 * h);
      const double err = std::abs(fd - g(i, j)) / std::max(1.0, std::abs(g(i, j)));
      worst = std::max(worst, err);
    }
  }
  return worst;
}

}  // namespace sso
