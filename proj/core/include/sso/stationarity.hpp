#pragma once

#include "sso/dense_matrix.hpp"
#include "sso/objectives.hpp"
#include "sso/support_matrix.hpp"

namespace sso {

// First-order stationarity residuals of a feasible point:
//   supp_residual = max |riemannian gradient| over support positions,
//   zrow_residual = max negative-part of the Euclidean gradient over zero
//                   rows (0 when there are none).
// The point is an eps-approximate first-order stationary point iff
// epsilon <= eps.
struct ResidualReport {
  double supp_residual = 0.0;
  double zrow_residual = 0.0;
  double epsilon = 0.0;
};

// grad - X Diag(X^T grad). The diagonal needs only p inner products, each
// over one column's support entries.
DenseMatrix riemannian_gradient(const SupportMatrix& x, const DenseMatrix& grad);

ResidualReport residuals(const Objective& obj, const SupportMatrix& x);
ResidualReport residuals_from_gradient(const SupportMatrix& x, const DenseMatrix& grad);

}  // namespace sso
