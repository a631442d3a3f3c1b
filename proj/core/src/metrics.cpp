#include "sso/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace sso {

namespace {

constexpr double kLog2 = 0.69314718055994530941723212145818;  // ln 2

double log2_of(double x) { return std::log(x) / kLog2; }

void check_labels(const ClusterAssignment& c, int p) {
  for (int l : c.labels) {
    if (l >= p) {
      throw Error(ErrorCode::InvalidShape,
                  "cluster id " + std::to_string(l) + " out of range");
    }
  }
}

}  // namespace

ClusterAssignment labels_from(const SupportMatrix& x) {
  ClusterAssignment c;
  c.labels.resize(x.rows());
  for (int i = 0; i < x.rows(); ++i) {
    c.labels[i] = x.has_entry(i) ? x.col(i) : kUnassigned;
  }
  return c;
}

ContingencyTable contingency(const ClusterAssignment& pred,
                             const ClusterAssignment& truth, int p) {
  if (pred.labels.size() != truth.labels.size()) {
    throw Error(ErrorCode::ShapeMismatch, "assignments have different lengths");
  }
  if (p < 1) throw Error(ErrorCode::DegenerateP, "need p >= 1");
  check_labels(pred, p);
  check_labels(truth, p);
  ContingencyTable t;
  t.p = p;
  t.n = static_cast<long>(pred.labels.size());
  t.counts.assign(p, std::vector<long>(p, 0));
  t.pred_sizes.assign(p, 0);
  t.truth_sizes.assign(p, 0);
  for (std::size_t k = 0; k < pred.labels.size(); ++k) {
    const int i = pred.labels[k];
    const int j = truth.labels[k];
    if (i >= 0) ++t.pred_sizes[i];
    if (j >= 0) ++t.truth_sizes[j];
    if (i >= 0 && j >= 0) ++t.counts[i][j];
  }
  return t;
}

double subspace_distance(const SupportMatrix& x, const SupportMatrix& y) {
  if (x.rows() != y.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "points live in different row spaces");
  }
  // ||X X^T - Y Y^T||^2 = ||X^T X||^2 + ||Y^T Y||^2 - 2 ||X^T Y||^2, with the
  // first two terms diagonal for supported points.
  std::vector<double> xsq(x.cols(), 0.0);
  std::vector<double> ysq(y.cols(), 0.0);
  std::vector<double> cross(static_cast<std::size_t>(x.cols()) * y.cols(), 0.0);
  for (int i = 0; i < x.rows(); ++i) {
    if (x.has_entry(i)) xsq[x.col(i)] += x.value(i) * x.value(i);
    if (y.has_entry(i)) ysq[y.col(i)] += y.value(i) * y.value(i);
    if (x.has_entry(i) && y.has_entry(i)) {
      cross[static_cast<std::size_t>(x.col(i)) * y.cols() + y.col(i)] +=
          x.value(i) * y.value(i);
    }
  }
  double px = 0.0, py = 0.0, c = 0.0;
  for (double v : xsq) px += v * v;
  for (double v : ysq) py += v * v;
  for (double v : cross) c += v * v;
  return std::sqrt(std::max(0.0, px + py - 2.0 * c));
}

double relative_gap(double f_alg, double f_opt) {
  return (f_alg - f_opt) / (1.0 + std::abs(f_opt));
}

double entropy(const ClusterAssignment& pred, const ClusterAssignment& truth, int p) {
  if (p < 2) throw Error(ErrorCode::DegenerateP, "entropy needs p >= 2");
  const ContingencyTable t = contingency(pred, truth, p);
  if (t.n <= 0) throw Error(ErrorCode::DegenerateP, "entropy needs points");
  double s = 0.0;
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      const long nij = t.counts[i][j];
      if (nij > 0) {
        s += static_cast<double>(nij) *
             log2_of(static_cast<double>(nij) / static_cast<double>(t.truth_sizes[j]));
      }
    }
  }
  const double e = -s / (static_cast<double>(t.n) * log2_of(static_cast<double>(p)));
  return e == 0.0 ? 0.0 : e;  // canonicalize -0
}

double purity(const ClusterAssignment& pred, const ClusterAssignment& truth, int p) {
  if (p < 2) throw Error(ErrorCode::DegenerateP, "purity needs p >= 2");
  const ContingencyTable t = contingency(pred, truth, p);
  if (t.n <= 0) throw Error(ErrorCode::DegenerateP, "purity needs points");
  long s = 0;
  for (int j = 0; j < p; ++j) {
    long best = 0;
    for (int i = 0; i < p; ++i) best = std::max(best, t.counts[i][j]);
    s += best;
  }
  return static_cast<double>(s) / static_cast<double>(t.n);
}

double nmi(const ClusterAssignment& pred, const ClusterAssignment& truth, int p) {
  if (p < 2) throw Error(ErrorCode::DegenerateP, "nmi needs p >= 2");
  const ContingencyTable t = contingency(pred, truth, p);
  if (t.n <= 0) throw Error(ErrorCode::DegenerateP, "nmi needs points");
  const double n = static_cast<double>(t.n);
  // h = sum (s/n) log2(n/s); phrased this way the perfect-clustering terms
  // are bit-identical to the mutual-information terms, so NMI lands on
  // exactly 1.
  auto side_entropy = [&](const std::vector<long>& sizes) {
    double h = 0.0;
    for (long s : sizes) {
      if (s > 0) {
        h += (static_cast<double>(s) / n) * log2_of(n / static_cast<double>(s));
      }
    }
    return h;
  };
  const double denom = std::max(side_entropy(t.pred_sizes), side_entropy(t.truth_sizes));
  if (!(denom > 0.0)) {
    throw Error(ErrorCode::DegenerateAssignment,
                "both assignments are single-cluster");
  }
  double mi = 0.0;
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      const long nij = t.counts[i][j];
      if (nij > 0) {
        mi += (static_cast<double>(nij) / n) *
              log2_of(n * static_cast<double>(nij) /
                      (static_cast<double>(t.pred_sizes[i]) *
                       static_cast<double>(t.truth_sizes[j])));
      }
    }
  }
  return mi / denom;
}

std::vector<int> max_weight_assignment(const std::vector<std::vector<long>>& w) {
  const int n = static_cast<int>(w.size());
  // Potentials form of the Hungarian algorithm on cost = -w, 1-based with a
  // dummy row/column 0.
  const long long kInf = (1LL << 60);
  std::vector<long long> u(n + 1, 0), v(n + 1, 0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<long long> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      long long delta = kInf;
      int j1 = -1;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const long long cur = -static_cast<long long>(w[i0 - 1][j - 1]) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> perm(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (match[j] > 0) perm[match[j] - 1] = j - 1;
  }
  return perm;
}

double accuracy(const ClusterAssignment& pred, const ClusterAssignment& truth, int p) {
  if (p < 1) throw Error(ErrorCode::DegenerateP, "accuracy needs p >= 1");
  const ContingencyTable t = contingency(pred, truth, p);
  if (t.n <= 0) throw Error(ErrorCode::DegenerateP, "accuracy needs points");
  const std::vector<int> perm = max_weight_assignment(t.counts);
  long correct = 0;
  for (int i = 0; i < p; ++i) correct += t.counts[i][perm[i]];
  return static_cast<double>(correct) / static_cast<double>(t.n);
}

}  // namespace sso
