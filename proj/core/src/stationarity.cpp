#include "sso/stationarity.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace sso {

DenseMatrix riemannian_gradient(const SupportMatrix& x, const DenseMatrix& grad) {
  if (grad.rows() != x.rows() || grad.cols() != x.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "gradient shape does not match point");
  }
  // Diag(X^T grad): one inner product per column over its support entries.
  std::vector<double> diag(x.cols(), 0.0);
  for (int i = 0; i < x.rows(); ++i) {
    if (x.has_entry(i)) diag[x.col(i)] += x.value(i) * grad(i, x.col(i));
  }
  DenseMatrix r = grad;
  for (int i = 0; i < x.rows(); ++i) {
    if (x.has_entry(i)) {
      const int j = x.col(i);
      r(i, j) = grad(i, j) - x.value(i) * diag[j];
    }
  }
  return r;
}

ResidualReport residuals_from_gradient(const SupportMatrix& x,
                                       const DenseMatrix& grad) {
  DenseMatrix rg = riemannian_gradient(x, grad);
  ResidualReport rep;
  for (int i = 0; i < x.rows(); ++i) {
    if (x.has_entry(i)) {
      rep.supp_residual = std::max(rep.supp_residual, std::abs(rg(i, x.col(i))));
    } else {
      for (int j = 0; j < x.cols(); ++j) {
        rep.zrow_residual = std::max(rep.zrow_residual, std::max(0.0, -grad(i, j)));
      }
    }
  }
  rep.epsilon = std::max(rep.supp_residual, rep.zrow_residual);
  return rep;
}

ResidualReport residuals(const Objective& obj, const SupportMatrix& x) {
  return residuals_from_gradient(x, obj.euclidean_gradient(x));
}

}  // namespace sso
