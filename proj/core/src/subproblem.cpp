#include "sso/subproblem.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace sso {

ProxData::ProxData(SupportMatrix z, DenseMatrix grad, double eta)
    : z_(std::move(z)), grad_(std::move(grad)), eta_(eta) {
  if (grad_.rows() != z_.rows() || grad_.cols() != z_.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "gradient shape does not match base point");
  }
  if (!(eta_ > 0.0)) {
    throw Error(ErrorCode::InvalidOptions, "proximal parameter must be positive");
  }
  d_ = DenseMatrix(z_.rows(), z_.cols());
  for (int i = 0; i < z_.rows(); ++i) {
    for (int j = 0; j < z_.cols(); ++j) d_(i, j) = -grad_(i, j);
  }
  for (int i = 0; i < z_.rows(); ++i) {
    if (z_.has_entry(i)) {
      const int j = z_.col(i);
      d_(i, j) = eta_ * z_.value(i) - grad_(i, j);
    }
  }
}

FixedSupportSolution solve_fixed_support(const ProxData& pd, const SignPattern& s) {
  const SupportMatrix& z = pd.base();
  if (s.rows() != z.rows() || s.cols() != z.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "pattern shape does not match base point");
  }
  s.validate();

  const int n = z.rows();
  const int p = z.cols();
  std::vector<std::vector<int>> lists(p);
  for (int i = 0; i < n; ++i) {
    if (s.col(i) >= 0) lists[s.col(i)].push_back(i);
  }

  std::vector<std::int32_t> out_cols(n, -1);
  std::vector<double> out_vals(n, 0.0);
  std::vector<double> alphas(p, 0.0);

  for (int j = 0; j < p; ++j) {
    double sumsq = 0.0;
    int npos = 0;
    for (int i : lists[j]) {
      const double w = std::max(0.0, pd.d(i, j));
      sumsq += w * w;
      npos += (w > 0.0);
    }
    const double norm = std::sqrt(sumsq);
    if (norm >= kValueClip) {
      for (int i : lists[j]) {
        const double w = pd.d(i, j);
        if (w > 0.0) {
          out_cols[i] = j;
          out_vals[i] = (npos == 1) ? 1.0 : w / norm;
        }
      }
      alphas[j] = -norm;
    } else {
      // All candidates clipped: the best the column can do is a unit vector
      // at the minimal-index argmin of grad - eta*Z over its rows.
      double best = std::numeric_limits<double>::infinity();
      int best_row = -1;
      for (int i : lists[j]) {
        const double v = -pd.d(i, j);
        if (v < best || (v == best && i < best_row)) {
          best = v;
          best_row = i;
        }
      }
      out_cols[best_row] = j;
      out_vals[best_row] = 1.0;
      alphas[j] = best;
    }
  }

  double linval = 0.0;
  for (double a : alphas) linval += a;
  return FixedSupportSolution{
      SupportMatrix(n, p, std::move(out_cols), std::move(out_vals)),
      std::move(alphas), linval};
}

double proximal_value(const ProxData& pd, const SupportMatrix& x, double f_z) {
  const SupportMatrix& z = pd.base();
  if (x.rows() != z.rows() || x.cols() != z.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "point shape does not match base point");
  }
  double inner = 0.0;
  double distsq = 0.0;
  for (int i = 0; i < x.rows(); ++i) {
    const bool hx = x.has_entry(i);
    const bool hz = z.has_entry(i);
    if (hx) inner += x.value(i) * pd.grad()(i, x.col(i));
    if (hz) inner -= z.value(i) * pd.grad()(i, z.col(i));
    if (hx && hz && x.col(i) == z.col(i)) {
      const double d = x.value(i) - z.value(i);
      distsq += d * d;
    } else {
      if (hx) distsq += x.value(i) * x.value(i);
      if (hz) distsq += z.value(i) * z.value(i);
    }
  }
  return f_z + inner + 0.5 * pd.eta() * distsq;
}

ColumnState::ColumnState(const ProxData& pd, const SignPattern& s) : pd_(&pd) {
  const int n = s.rows();
  const int p = s.cols();
  if (n != pd.base().rows() || p != pd.base().cols()) {
    throw Error(ErrorCode::ShapeMismatch, "pattern shape does not match base point");
  }
  s.validate();
  row_col_.assign(n, -1);
  row_pos_.assign(n, -1);
  members_.assign(p, {});
  sumsq_.assign(p, 0.0);
  moves_.assign(p, 0);
  for (int i = 0; i < n; ++i) {
    const int j = s.col(i);
    if (j < 0) continue;
    attach(i, j);
    const double w = std::max(0.0, pd_->d(i, j));
    sumsq_[j] += w * w;
  }
}

double ColumnState::alpha(int j) const {
  if (members_[j].empty()) {
    throw Error(ErrorCode::EmptyColumnInPattern,
                "column " + std::to_string(j) + " has no rows", -1, j);
  }
  const double norm = std::sqrt(sumsq_[j]);
  if (norm >= kValueClip) return -norm;
  double best = std::numeric_limits<double>::infinity();
  int best_row = -1;
  for (int i : members_[j]) {
    const double v = -pd_->d(i, j);
    if (v < best || (v == best && i < best_row)) {
      best = v;
      best_row = i;
    }
  }
  return best;
}

double ColumnState::total_alpha() const {
  double s = 0.0;
  for (int j = 0; j < n_cols(); ++j) s += alpha(j);
  return s;
}

int ColumnState::unit_row(int j) const {
  double best = std::numeric_limits<double>::infinity();
  int best_row = -1;
  for (int i : members_[j]) {
    const double v = -pd_->d(i, j);
    if (v < best || (v == best && i < best_row)) {
      best = v;
      best_row = i;
    }
  }
  return best_row;
}

void ColumnState::detach(int row, int from) {
  const int pos = row_pos_[row];
  const int last = members_[from].back();
  members_[from][pos] = last;
  row_pos_[last] = pos;
  members_[from].pop_back();
  row_col_[row] = -1;
  row_pos_[row] = -1;
}

void ColumnState::attach(int row, int to) {
  members_[to].push_back(row);
  row_pos_[row] = static_cast<int>(members_[to].size()) - 1;
  row_col_[row] = to;
}

void ColumnState::bump_moves(int j) {
  // Repeated add/subtract of squares accumulates rounding error; rebuild the
  // column sum from scratch every 128 taps.
  if (++moves_[j] < 128) return;
  double s = 0.0;
  for (int i : members_[j]) {
    const double w = std::max(0.0, pd_->d(i, j));
    s += w * w;
  }
  sumsq_[j] = s;
  moves_[j] = 0;
}

namespace {

double alpha_or_zero(const ColumnState& cs, int j) {
  return cs.members(j).empty() ? 0.0 : cs.alpha(j);
}

}  // namespace

ColumnState::MoveDelta ColumnState::move_row(int row, int from, int to) {
  if (row_col_[row] != from) {
    throw Error(ErrorCode::RowNotInColumn,
                "row " + std::to_string(row) + " is not in column " +
                    std::to_string(from),
                row, from);
  }
  undo_.push_back({row, from, to, sumsq_[from], sumsq_[to], moves_[from], moves_[to]});
  const double a_from0 = alpha_or_zero(*this, from);
  const double a_to0 = alpha_or_zero(*this, to);
  if (from != to) {
    detach(row, from);
    const double wf = std::max(0.0, pd_->d(row, from));
    sumsq_[from] -= wf * wf;
    if (sumsq_[from] < 0.0) sumsq_[from] = 0.0;
    bump_moves(from);
    attach(row, to);
    const double wt = std::max(0.0, pd_->d(row, to));
    sumsq_[to] += wt * wt;
    bump_moves(to);
  }
  return {alpha_or_zero(*this, from) - a_from0, alpha_or_zero(*this, to) - a_to0};
}

ColumnState::MoveDelta ColumnState::insert_row(int row, int to) {
  if (row_col_[row] != -1) {
    throw Error(ErrorCode::RowNotInColumn,
                "row " + std::to_string(row) + " is already assigned", row,
                row_col_[row]);
  }
  undo_.push_back({row, -1, to, 0.0, sumsq_[to], 0, moves_[to]});
  const double a_to0 = alpha_or_zero(*this, to);
  attach(row, to);
  const double wt = std::max(0.0, pd_->d(row, to));
  sumsq_[to] += wt * wt;
  bump_moves(to);
  return {0.0, alpha_or_zero(*this, to) - a_to0};
}

void ColumnState::undo_last_move() {
  if (undo_.empty()) {
    throw Error(ErrorCode::InvalidOptions, "nothing to undo");
  }
  const UndoRecord rec = undo_.back();
  undo_.pop_back();
  if (rec.from == -1) {
    detach(rec.row, rec.to);
  } else if (rec.from != rec.to) {
    detach(rec.row, rec.to);
    attach(rec.row, rec.from);
    sumsq_[rec.from] = rec.prev_sumsq_from;
    moves_[rec.from] = rec.prev_moves_from;
  }
  sumsq_[rec.to] = rec.prev_sumsq_to;
  moves_[rec.to] = rec.prev_moves_to;
}

void ColumnState::erase_row(int row) {
  const int from = row_col_[row];
  if (from < 0) {
    throw Error(ErrorCode::RowNotInColumn,
                "row " + std::to_string(row) + " is not assigned", row);
  }
  detach(row, from);
  const double w = std::max(0.0, pd_->d(row, from));
  sumsq_[from] -= w * w;
  if (sumsq_[from] < 0.0) sumsq_[from] = 0.0;
  bump_moves(from);
}

ColumnState build_column_state(const ProxData& pd, const SignPattern& s) {
  return ColumnState(pd, s);
}

}  // namespace sso
