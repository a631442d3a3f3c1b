#pragma once

#include <cstdint>
#include <vector>

#include "sso/dense_matrix.hpp"
#include "sso/support_matrix.hpp"

namespace sso {

// Synthetic instance with a known global minimizer: the columns of x_opt
// span the top-p eigenspace of A^T A and f_opt = -1/2 sum of the top-p
// eigenvalues.
struct PlantedNpca {
  DenseMatrix a;  // m x n
  SupportMatrix x_opt;
  double f_opt;
};

// Builds A = U S V^T from a seeded Gaussian orthonormal U (m x m), a
// descending diagonal S with entries uniform in (0.5, 1.5), and
// V = [x_opt, completion] where x_opt is a seeded feasible point with no
// zero rows and at least two rows per column. Requires p < m <= n and
// n >= 2p.
PlantedNpca gen_planted_npca(int n, int m, int p, std::uint64_t seed);

// Seeded feasible point: uniform row-to-column assignment redrawn until
// every column is nonempty, positive values, columns normalized. Never
// emits empty rows.
SupportMatrix gen_random_feasible(int n, int p, std::uint64_t seed);

// Descending eigenvalues and matching eigenvectors (columns) of a symmetric
// matrix.
struct SymmetricEig {
  std::vector<double> values;
  DenseMatrix vectors;
};
SymmetricEig symmetric_eig(const DenseMatrix& m);

// Feasible point from the top-p eigenvectors of a symmetric matrix: each
// row joins the column of its largest-magnitude eigenvector entry (minimal
// index on ties), columns renormalized. Rows whose largest entry is below
// 1e-12 stay empty when the pattern still covers every column; otherwise
// uncovered columns are repaired deterministically.
SupportMatrix spectral_init(const DenseMatrix& mat, int p);

}  // namespace sso
