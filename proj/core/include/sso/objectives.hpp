#pragma once

#include <memory>
#include <optional>

#include "sso/dense_matrix.hpp"
#include "sso/support_matrix.hpp"

namespace sso {

// Evaluation contract for a smooth objective f and its ambient Euclidean
// gradient. value/euclidean_gradient are pure; value_dense must accept
// arbitrary (infeasible) dense points so that finite-difference checks can
// probe the gradient formulas.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual int rows() const = 0;  // n
  virtual int cols() const = 0;  // p

  virtual double value(const SupportMatrix& x) const = 0;
  virtual double value_dense(const DenseMatrix& x) const = 0;

  // Full n x p ambient gradient; the zero-row refinement reads entire rows,
  // so a restriction to the support would not be enough.
  virtual DenseMatrix euclidean_gradient(const SupportMatrix& x) const = 0;

  virtual std::optional<double> lipschitz_hint() const { return std::nullopt; }

 protected:
  void check_shape(int n, int p) const;
};

// f(X) = -1/2 tr(X^T A^T A X) with data A of size m x n, m > p. The Gram
// matrix A^T A is never formed; products go through A X.
class NpcaObjective : public Objective {
 public:
  NpcaObjective(DenseMatrix a, int p);

  int rows() const override { return a_.cols(); }
  int cols() const override { return p_; }
  double value(const SupportMatrix& x) const override;
  double value_dense(const DenseMatrix& x) const override;
  DenseMatrix euclidean_gradient(const SupportMatrix& x) const override;

  const DenseMatrix& data() const { return a_; }

 private:
  DenseMatrix a_;  // m x n
  int p_;
};

// f(X) = 1/2 ||A - X X^T A||_F^2 with data A of size n x m. With
// precompute_gram, B = A A^T is cached up front (useful when n << m).
class OnmfObjective : public Objective {
 public:
  OnmfObjective(DenseMatrix a, int p, bool precompute_gram = false);

  int rows() const override { return a_.rows(); }
  int cols() const override { return p_; }
  double value(const SupportMatrix& x) const override;
  double value_dense(const DenseMatrix& x) const override;
  DenseMatrix euclidean_gradient(const SupportMatrix& x) const override;

 private:
  DenseMatrix a_;     // n x m
  DenseMatrix gram_;  // B = A A^T when precomputed, else empty
  int p_;
  bool precomputed_;
};

// f(X) = -1/4 ||X^T A X||_F^2 with symmetric A of size n x n.
class CommunityObjective : public Objective {
 public:
  CommunityObjective(DenseMatrix a, int p);

  int rows() const override { return a_.rows(); }
  int cols() const override { return p_; }
  double value(const SupportMatrix& x) const override;
  double value_dense(const DenseMatrix& x) const override;
  DenseMatrix euclidean_gradient(const SupportMatrix& x) const override;

 private:
  DenseMatrix a_;  // n x n symmetric
  int p_;
};

// f(X) = tr(C^T X); the gradient is the constant C.
class LinearObjective : public Objective {
 public:
  explicit LinearObjective(DenseMatrix c);

  int rows() const override { return c_.rows(); }
  int cols() const override { return c_.cols(); }
  double value(const SupportMatrix& x) const override;
  double value_dense(const DenseMatrix& x) const override;
  DenseMatrix euclidean_gradient(const SupportMatrix& x) const override;

 private:
  DenseMatrix c_;
};

// Central finite differences of value_dense around to_dense(x), compared
// entrywise against euclidean_gradient(x). Returns the maximum of
// |fd - g| / max(1, |g|) over all entries.
double fd_gradient_check(const Objective& obj, const SupportMatrix& x,
                         double h = 1e-6);

}  // namespace sso
