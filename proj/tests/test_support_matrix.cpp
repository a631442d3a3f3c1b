#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sso/rng.hpp"
#include "sso/support_matrix.hpp"
#include "test_util.hpp"

using namespace sso;

namespace {

bool dense_feasible(const SupportMatrix& x) {
  DenseMatrix d = to_dense(x);
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (d.data()[k] < 0.0) return false;
  }
  for (int a = 0; a < d.cols(); ++a) {
    for (int b = 0; b < d.cols(); ++b) {
      double s = 0.0;
      for (int i = 0; i < d.rows(); ++i) s += d(i, a) * d(i, b);
      const double want = a == b ? 1.0 : 0.0;
      if (std::abs(s - want) > 1e-12) return false;
    }
  }
  return true;
}

bool validates(const SupportMatrix& x) {
  try {
    validate(x);
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

TEST_CASE("validate accepts unit vector with p=1") {
  SupportMatrix x = SupportMatrix::from_entries(2, 1, {{0, 0, 1.0}});
  CHECK_NOTHROW(validate(x));
}

TEST_CASE("validate accepts hand-checked 3x2 point") {
  SupportMatrix x =
      SupportMatrix::from_entries(3, 2, {{0, 0, 0.6}, {1, 0, 0.8}, {2, 1, 1.0}});
  CHECK_NOTHROW(validate(x));
}

TEST_CASE("validate reports an empty column") {
  SupportMatrix x = SupportMatrix::from_entries(3, 2, {{0, 0, 1.0}});
  try {
    validate(x);
    FAIL("expected ZeroColumn");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroColumn);
    CHECK(e.col() == 1);
  }
}

TEST_CASE("validate reports a non-unit column") {
  SupportMatrix x =
      SupportMatrix::from_entries(3, 2, {{0, 0, 0.6}, {1, 0, 0.9}, {2, 1, 1.0}});
  try {
    validate(x);
    FAIL("expected NonUnitColumn");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonUnitColumn);
    CHECK(e.col() == 0);
  }
}

TEST_CASE("validate reports a negative value") {
  SupportMatrix x =
      SupportMatrix::from_entries(3, 2, {{0, 0, -1.0}, {1, 1, 1.0}, {2, 0, 1.0}});
  try {
    validate(x);
    FAIL("expected NonPositiveValue");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonPositiveValue);
    CHECK(e.row() == 0);
  }
}

TEST_CASE("tiny nonnegative values are clipped to empty at construction") {
  SupportMatrix x = SupportMatrix::from_entries(
      3, 2, {{0, 0, 1.0}, {1, 1, 1.0}, {2, 1, 5e-16}});
  CHECK(!x.has_entry(2));
  CHECK(x.value(2) == 0.0);
}

TEST_CASE("to_dense places entries and zeros elsewhere") {
  SupportMatrix eye = SupportMatrix::from_entries(2, 2, {{0, 0, 1.0}, {1, 1, 1.0}});
  DenseMatrix id = to_dense(eye);
  CHECK(id(0, 0) == 1.0);
  CHECK(id(0, 1) == 0.0);
  CHECK(id(1, 0) == 0.0);
  CHECK(id(1, 1) == 1.0);

  SupportMatrix x =
      SupportMatrix::from_entries(3, 2, {{0, 0, 0.6}, {1, 0, 0.8}, {2, 1, 1.0}});
  DenseMatrix d = to_dense(x);
  CHECK(d(0, 0) == 0.6);
  CHECK(d(0, 1) == 0.0);
  CHECK(d(1, 0) == 0.8);
  CHECK(d(2, 1) == 1.0);

  SupportMatrix with_gap =
      SupportMatrix::from_entries(3, 2, {{0, 0, 1.0}, {1, 1, 1.0}});
  DenseMatrix g = to_dense(with_gap);
  CHECK(g(2, 0) == 0.0);
  CHECK(g(2, 1) == 0.0);
}

TEST_CASE("p > n is rejected") {
  CHECK_THROWS_AS(SupportMatrix(2, 3), Error);
}

TEST_CASE("frob_dist basics") {
  SupportMatrix x =
      SupportMatrix::from_entries(3, 2, {{0, 0, 0.6}, {1, 0, 0.8}, {2, 1, 1.0}});
  CHECK(frob_dist(x, x) == 0.0);

  // Same support position, values 0.6 vs 0.8: contributes (0.6-0.8)^2.
  SupportMatrix a =
      SupportMatrix::from_entries(3, 2, {{0, 0, 0.6}, {1, 0, 0.8}, {2, 1, 1.0}});
  SupportMatrix b =
      SupportMatrix::from_entries(3, 2, {{0, 0, 0.8}, {1, 0, 0.6}, {2, 1, 1.0}});
  CHECK(frob_dist(a, b) == doctest::Approx(std::sqrt(0.08)).epsilon(1e-14));

  // Disjoint unit supports at p = 1.
  SupportMatrix u = SupportMatrix::from_entries(2, 1, {{0, 0, 1.0}});
  SupportMatrix v = SupportMatrix::from_entries(2, 1, {{1, 0, 1.0}});
  CHECK(frob_dist(u, v) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

  SupportMatrix wrong(4, 2);
  CHECK_THROWS_AS(frob_dist(x, wrong), Error);
}

TEST_CASE("zero_rows") {
  SupportMatrix full =
      SupportMatrix::from_entries(3, 2, {{0, 0, 0.6}, {1, 0, 0.8}, {2, 1, 1.0}});
  CHECK(zero_rows(full).empty());

  SupportMatrix gap = SupportMatrix::from_entries(3, 2, {{0, 0, 1.0}, {1, 1, 1.0}});
  CHECK(zero_rows(gap) == std::vector<int>{2});

  // Validation is not required for this query.
  SupportMatrix empty(4, 2);
  CHECK(zero_rows(empty) == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("validate agrees with the dense feasibility oracle") {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const int p = 1 + rng.uniform_int(4);
    const int n = p + 1 + rng.uniform_int(50 - p);
    SupportMatrix x = testutil::random_feasible_with_zeros(n, p, 0.2, rng);
    CHECK(validates(x) == dense_feasible(x));

    // Corrupt a value or drop a column and confirm both reject.
    std::vector<std::int32_t> cols = x.row_cols();
    std::vector<double> vals = x.row_values();
    const int i = rng.uniform_int(n);
    if (cols[i] >= 0) {
      vals[i] += 0.25;
      SupportMatrix bad(n, p, cols, vals);
      CHECK(validates(bad) == dense_feasible(bad));
    }
  }
}

TEST_CASE("frob_dist matches the dense distance") {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const int p = 1 + rng.uniform_int(3);
    const int n = p + 1 + rng.uniform_int(20);
    SupportMatrix x = testutil::random_feasible_with_zeros(n, p, 0.2, rng);
    SupportMatrix y = testutil::random_feasible_with_zeros(n, p, 0.2, rng);
    DenseMatrix dx = to_dense(x);
    DenseMatrix dy = to_dense(y);
    double s = 0.0;
    for (std::size_t k = 0; k < dx.size(); ++k) {
      const double d = dx.data()[k] - dy.data()[k];
      s += d * d;
    }
    CHECK(frob_dist(x, y) == doctest::Approx(std::sqrt(s)).epsilon(1e-12));
  }
}

TEST_CASE("to_dense round-trips through support extraction") {
  Rng rng(47);
  for (int trial = 0; trial < 50; ++trial) {
    const int p = 1 + rng.uniform_int(3);
    const int n = p + 1 + rng.uniform_int(20);
    SupportMatrix x = testutil::random_feasible_with_zeros(n, p, 0.3, rng);
    DenseMatrix d = to_dense(x);
    std::vector<SupportMatrix::Entry> entries;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < p; ++j) {
        if (d(i, j) != 0.0) entries.push_back({i, j, d(i, j)});
      }
    }
    SupportMatrix back = SupportMatrix::from_entries(n, p, entries);
    CHECK(back.row_cols() == x.row_cols());
    CHECK(frob_dist(back, x) == 0.0);
  }
}
