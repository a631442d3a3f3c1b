#pragma once

#include <string>
#include <vector>

#include "sso/dense_matrix.hpp"
#include "sso/support_matrix.hpp"

namespace sso {

enum class MatrixFormat { kMatrixMarket, kCsv };

// Reads a dense matrix. Matrix Market coordinate and array files (real,
// general or symmetric) are accepted, with symmetric storage expanded. CSV
// expects comma-separated numeric fields; a non-numeric first line is
// treated as a header. Parse failures report 1-based line numbers.
DenseMatrix load_matrix(const std::string& path, MatrixFormat format);

// Picks the format from the file extension (.mtx/.mm -> Matrix Market,
// otherwise CSV).
DenseMatrix load_matrix_auto(const std::string& path);

// Matrix Market array format, general, column-major, full precision.
void save_matrix_market(const std::string& path, const DenseMatrix& m);

// Support-list format for feasible points: header "n p", then lines
// "row col value" with 0-based indices.
void save_support(const std::string& path, const SupportMatrix& x);
SupportMatrix load_support(const std::string& path);

// Single-column integer labels; negative entries mean unassigned.
std::vector<int> load_labels_csv(const std::string& path);

}  // namespace sso
