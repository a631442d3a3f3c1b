#include "sso/problems.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sso/rng.hpp"

namespace sso {

namespace {

using EigenRowMajor =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Modified Gram-Schmidt with one re-orthogonalization pass; columns that
// collapse are redrawn from the generator.
void orthonormalize_columns(EigenRowMajor& m, Rng& rng) {
  const int cols = static_cast<int>(m.cols());
  for (int j = 0; j < cols; ++j) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      for (int pass = 0; pass < 2; ++pass) {
        for (int k = 0; k < j; ++k) {
          m.col(j) -= m.col(k).dot(m.col(j)) * m.col(k);
        }
      }
      const double norm = m.col(j).norm();
      if (norm > 1e-8) {
        m.col(j) /= norm;
        break;
      }
      for (int r = 0; r < m.rows(); ++r) m(r, j) = rng.normal();
    }
  }
}

// Row-to-column assignment covering every column at least min_per_col times.
std::vector<std::int32_t> random_assignment(int n, int p, int min_per_col, Rng& rng) {
  std::vector<std::int32_t> assign(n);
  if (min_per_col >= 2) {
    // Deal min_per_col shuffled rows to each column first, rest uniformly.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (int i = n - 1; i > 0; --i) {
      std::swap(order[i], order[rng.uniform_int(i + 1)]);
    }
    int next = 0;
    for (int j = 0; j < p; ++j) {
      for (int c = 0; c < min_per_col; ++c) assign[order[next++]] = j;
    }
    for (; next < n; ++next) assign[order[next]] = rng.uniform_int(p);
    return assign;
  }
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<char> seen(p, 0);
    for (int i = 0; i < n; ++i) {
      assign[i] = rng.uniform_int(p);
      seen[assign[i]] = 1;
    }
    if (std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; })) {
      return assign;
    }
  }
  for (int j = 0; j < p; ++j) assign[j] = j;  // deterministic fallback
  return assign;
}

SupportMatrix feasible_from_assignment(int n, int p,
                                       const std::vector<std::int32_t>& assign,
                                       Rng& rng) {
  std::vector<double> values(n);
  std::vector<double> colnorm(p, 0.0);
  for (int i = 0; i < n; ++i) {
    values[i] = rng.uniform(0.1, 1.1);
    colnorm[assign[i]] += values[i] * values[i];
  }
  for (double& c : colnorm) c = std::sqrt(c);
  for (int i = 0; i < n; ++i) values[i] /= colnorm[assign[i]];
  return SupportMatrix(n, p, assign, std::move(values));
}

}  // namespace

SupportMatrix gen_random_feasible(int n, int p, std::uint64_t seed) {
  if (p < 1 || p >= n) {
    throw Error(ErrorCode::InvalidShape, "need 1 <= p < n");
  }
  Rng rng(seed);
  const std::vector<std::int32_t> assign = random_assignment(n, p, 1, rng);
  return feasible_from_assignment(n, p, assign, rng);
}

PlantedNpca gen_planted_npca(int n, int m, int p, std::uint64_t seed) {
  if (p < 1 || p >= m || m > n || n < 2 * p) {
    throw Error(ErrorCode::InvalidShape,
                "planted instance needs p < m <= n and n >= 2p");
  }
  Rng rng(seed);

  const std::vector<std::int32_t> assign = random_assignment(n, p, 2, rng);
  SupportMatrix x_opt = feasible_from_assignment(n, p, assign, rng);

  std::vector<double> sigma(m);
  for (double& s : sigma) s = rng.uniform(0.5, 1.5);
  std::sort(sigma.begin(), sigma.end(), std::greater<double>());

  EigenRowMajor u(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) u(i, j) = rng.normal();
  }
  orthonormalize_columns(u, rng);

  // V = [x_opt, completion]: the completion is drawn Gaussian and
  // orthonormalized against the planted columns.
  EigenRowMajor v(n, m);
  v.setZero();
  for (int i = 0; i < n; ++i) {
    if (x_opt.has_entry(i)) v(i, x_opt.col(i)) = x_opt.value(i);
  }
  for (int j = p; j < m; ++j) {
    for (int i = 0; i < n; ++i) v(i, j) = rng.normal();
  }
  for (int j = p; j < m; ++j) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      for (int pass = 0; pass < 2; ++pass) {
        for (int k = 0; k < j; ++k) {
          v.col(j) -= v.col(k).dot(v.col(j)) * v.col(k);
        }
      }
      const double norm = v.col(j).norm();
      if (norm > 1e-8) {
        v.col(j) /= norm;
        break;
      }
      for (int i = 0; i < n; ++i) v(i, j) = rng.normal();
    }
  }

  EigenRowMajor us = u;
  for (int j = 0; j < m; ++j) us.col(j) *= sigma[j];
  EigenRowMajor a_eig = us * v.transpose();

  DenseMatrix a(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = a_eig(i, j);
  }

  double f_opt = 0.0;
  for (int j = 0; j < p; ++j) f_opt += sigma[j] * sigma[j];
  f_opt *= -0.5;

  return PlantedNpca{std::move(a), std::move(x_opt), f_opt};
}

SymmetricEig symmetric_eig(const DenseMatrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "eigendecomposition needs a square matrix");
  }
  const int n = m.rows();
  const double scale = std::max(1.0, m.max_abs());
  Eigen::MatrixXd sym(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (std::abs(m(i, j) - m(j, i)) > 1e-8 * scale) {
        throw Error(ErrorCode::ShapeMismatch, "matrix is not symmetric", i, j);
      }
      sym(i, j) = 0.5 * (m(i, j) + m(j, i));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::EigFailure, "symmetric eigendecomposition failed");
  }
  SymmetricEig out;
  out.values.resize(n);
  out.vectors = DenseMatrix(n, n);
  for (int k = 0; k < n; ++k) {
    const int src = n - 1 - k;  // ascending -> descending
    out.values[k] = es.eigenvalues()(src);
    for (int i = 0; i < n; ++i) out.vectors(i, k) = es.eigenvectors()(i, src);
  }
  return out;
}

SupportMatrix spectral_init(const DenseMatrix& mat, int p) {
  const int n = mat.rows();
  if (p < 1 || p >= n) {
    throw Error(ErrorCode::InvalidShape, "need 1 <= p < n");
  }
  SymmetricEig eig = symmetric_eig(mat);

  std::vector<std::int32_t> cols(n, -1);
  std::vector<double> vals(n, 0.0);
  std::vector<int> coverage(p, 0);
  for (int i = 0; i < n; ++i) {
    int bj = 0;
    double best = std::abs(eig.vectors(i, 0));
    for (int j = 1; j < p; ++j) {
      const double a = std::abs(eig.vectors(i, j));
      if (a > best) {
        best = a;
        bj = j;
      }
    }
    if (best >= 1e-12) {
      cols[i] = bj;
      vals[i] = best;
      ++coverage[bj];
    }
  }

  auto uncovered = [&]() {
    for (int j = 0; j < p; ++j) {
      if (coverage[j] == 0) return j;
    }
    return -1;
  };

  if (uncovered() >= 0) {
    // Hand the near-zero rows out round-robin, then steal rows for any
    // column that is still empty.
    int next = 0;
    for (int i = 0; i < n; ++i) {
      if (cols[i] >= 0) continue;
      cols[i] = next;
      vals[i] = 1.0;
      ++coverage[next];
      next = (next + 1) % p;
    }
    for (int j = uncovered(); j >= 0; j = uncovered()) {
      int pick = -1;
      double best = -1.0;
      for (int i = 0; i < n; ++i) {
        if (coverage[cols[i]] < 2) continue;
        const double a = std::abs(eig.vectors(i, j));
        if (a > best) {
          best = a;
          pick = i;
        }
      }
      if (pick < 0) {
        throw Error(ErrorCode::EigFailure, "could not build a feasible spectral point");
      }
      --coverage[cols[pick]];
      cols[pick] = j;
      vals[pick] = std::max(best, 1e-6);
      ++coverage[j];
    }
  }

  std::vector<double> colnorm(p, 0.0);
  for (int i = 0; i < n; ++i) {
    if (cols[i] >= 0) colnorm[cols[i]] += vals[i] * vals[i];
  }
  for (double& c : colnorm) c = std::sqrt(c);
  for (int i = 0; i < n; ++i) {
    if (cols[i] >= 0) vals[i] /= colnorm[cols[i]];
  }
  SupportMatrix out(n, p, std::move(cols), std::move(vals));
  validate(out);
  return out;
}

}  // namespace sso
