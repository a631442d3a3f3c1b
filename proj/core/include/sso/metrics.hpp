#pragma once

#include <vector>

#include "sso/support_matrix.hpp"

namespace sso {

// Cluster id per point in [0, p), or kUnassigned for points without one.
inline constexpr int kUnassigned = -1;

struct ClusterAssignment {
  std::vector<int> labels;

  int size() const { return static_cast<int>(labels.size()); }
};

// Counts of co-assigned points: counts[i][j] = |predicted cluster i and
// truth cluster j|. Unassigned points on either side are excluded from the
// table but still counted in n.
struct ContingencyTable {
  int p = 0;
  long n = 0;  // total points, including unassigned ones
  std::vector<std::vector<long>> counts;
  std::vector<long> pred_sizes;   // row sums
  std::vector<long> truth_sizes;  // column sums
};

ClusterAssignment labels_from(const SupportMatrix& x);

ContingencyTable contingency(const ClusterAssignment& pred,
                             const ClusterAssignment& truth, int p);

// ||X X^T - Y Y^T||_F without forming the n x n projectors.
double subspace_distance(const SupportMatrix& x, const SupportMatrix& y);

// (f_alg - f_opt) / (1 + |f_opt|); may be negative, never clamped.
double relative_gap(double f_alg, double f_opt);

// Base-2 clustering entropy normalized by n log2 p; 0 for a perfect
// clustering. Requires p >= 2.
double entropy(const ClusterAssignment& pred, const ClusterAssignment& truth, int p);

double purity(const ClusterAssignment& pred, const ClusterAssignment& truth, int p);

// Normalized mutual information; throws DegenerateAssignment when both
// sides are single-cluster.
double nmi(const ClusterAssignment& pred, const ClusterAssignment& truth, int p);

// Fraction of points whose relabeled prediction matches the truth, with the
// relabeling chosen by exact maximum-weight matching on the contingency
// table. Unassigned predictions always count as misses.
double accuracy(const ClusterAssignment& pred, const ClusterAssignment& truth, int p);

// Exact maximum-weight assignment on a p x p score matrix; returns the
// permutation perm[pred] = truth. Exposed for testing.
std::vector<int> max_weight_assignment(const std::vector<std::vector<long>>& w);

}  // namespace sso
