#include "sso/matrix_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace sso {

namespace {

[[noreturn]] void parse_fail(const std::string& path, long line, const std::string& what) {
  throw Error(ErrorCode::ParseError,
              path + ":" + std::to_string(line) + ": " + what, line);
}

bool parse_double(const std::string& tok, double& out) {
  const char* s = tok.c_str();
  char* end = nullptr;
  out = std::strtod(s, &end);
  return end != s && *end == '\0';
}

bool parse_long(const std::string& tok, long& out) {
  const char* s = tok.c_str();
  char* end = nullptr;
  out = std::strtol(s, &end, 10);
  return end != s && *end == '\0';
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream iss(line);
  std::string t;
  while (iss >> t) toks.push_back(t);
  return toks;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> toks;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      toks.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  toks.push_back(cur);
  for (std::string& t : toks) {
    const auto b = t.find_first_not_of(" \t");
    const auto e = t.find_last_not_of(" \t");
    t = (b == std::string::npos) ? std::string() : t.substr(b, e - b + 1);
  }
  return toks;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

DenseMatrix load_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::string line;
  long lineno = 0;

  if (!std::getline(in, line)) parse_fail(path, 1, "empty file");
  ++lineno;
  std::vector<std::string> banner = split_ws(line);
  if (banner.size() < 4 || lower(banner[0]) != "%%matrixmarket" ||
      lower(banner[1]) != "matrix") {
    parse_fail(path, lineno, "missing MatrixMarket banner");
  }
  const std::string format = lower(banner[2]);
  const std::string field = lower(banner[3]);
  const std::string symmetry = banner.size() >= 5 ? lower(banner[4]) : "general";
  if (format != "coordinate" && format != "array") {
    parse_fail(path, lineno, "unsupported format " + format);
  }
  if (field != "real" && field != "integer") {
    parse_fail(path, lineno, "unsupported field " + field);
  }
  if (symmetry != "general" && symmetry != "symmetric") {
    parse_fail(path, lineno, "unsupported symmetry " + symmetry);
  }
  const bool symmetric = symmetry == "symmetric";

  auto next_content = [&](std::string& out) {
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line[0] == '%') continue;
      if (split_ws(line).empty()) continue;
      out = line;
      return true;
    }
    return false;
  };

  std::string size_line;
  if (!next_content(size_line)) parse_fail(path, lineno, "missing size line");
  std::vector<std::string> size_toks = split_ws(size_line);

  if (format == "coordinate") {
    long rows = 0, cols = 0, nnz = 0;
    if (size_toks.size() != 3 || !parse_long(size_toks[0], rows) ||
        !parse_long(size_toks[1], cols) || !parse_long(size_toks[2], nnz)) {
      parse_fail(path, lineno, "bad coordinate size line");
    }
    if (rows <= 0 || cols <= 0 || nnz < 0) {
      throw Error(ErrorCode::ShapeMismatch, path + ": non-positive dimensions");
    }
    if (symmetric && rows != cols) {
      throw Error(ErrorCode::ShapeMismatch, path + ": symmetric matrix must be square");
    }
    DenseMatrix m(static_cast<int>(rows), static_cast<int>(cols));
    for (long k = 0; k < nnz; ++k) {
      std::string entry;
      if (!next_content(entry)) parse_fail(path, lineno, "unexpected end of file");
      std::vector<std::string> toks = split_ws(entry);
      long i = 0, j = 0;
      double v = 0.0;
      if (toks.size() != 3 || !parse_long(toks[0], i) || !parse_long(toks[1], j) ||
          !parse_double(toks[2], v)) {
        parse_fail(path, lineno, "bad coordinate entry");
      }
      if (i < 1 || i > rows || j < 1 || j > cols) {
        parse_fail(path, lineno, "index out of range");
      }
      m(static_cast<int>(i - 1), static_cast<int>(j - 1)) = v;
      if (symmetric) m(static_cast<int>(j - 1), static_cast<int>(i - 1)) = v;
    }
    return m;
  }

  // array format, column-major; symmetric files store the lower triangle
  long rows = 0, cols = 0;
  if (size_toks.size() != 2 || !parse_long(size_toks[0], rows) ||
      !parse_long(size_toks[1], cols)) {
    parse_fail(path, lineno, "bad array size line");
  }
  if (rows <= 0 || cols <= 0) {
    throw Error(ErrorCode::ShapeMismatch, path + ": non-positive dimensions");
  }
  if (symmetric && rows != cols) {
    throw Error(ErrorCode::ShapeMismatch, path + ": symmetric matrix must be square");
  }
  DenseMatrix m(static_cast<int>(rows), static_cast<int>(cols));
  std::vector<double> pending;  // values may come several per line
  std::size_t used = 0;
  auto next_value = [&](double& v) {
    while (used >= pending.size()) {
      std::string entry;
      if (!next_content(entry)) return false;
      pending.clear();
      used = 0;
      for (const std::string& t : split_ws(entry)) {
        double x = 0.0;
        if (!parse_double(t, x)) parse_fail(path, lineno, "bad numeric value");
        pending.push_back(x);
      }
    }
    v = pending[used++];
    return true;
  };
  for (long j = 0; j < cols; ++j) {
    for (long i = symmetric ? j : 0; i < rows; ++i) {
      double v = 0.0;
      if (!next_value(v)) parse_fail(path, lineno, "unexpected end of file");
      m(static_cast<int>(i), static_cast<int>(j)) = v;
      if (symmetric) m(static_cast<int>(j), static_cast<int>(i)) = v;
    }
  }
  return m;
}

DenseMatrix load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::string line;
  long lineno = 0;
  std::vector<std::vector<double>> rows;
  bool first = true;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (split_ws(line).empty()) continue;
    std::vector<std::string> toks = split_csv(line);
    std::vector<double> vals(toks.size());
    bool numeric = true;
    for (std::size_t k = 0; k < toks.size(); ++k) {
      if (!parse_double(toks[k], vals[k])) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (first) {
        first = false;  // header row
        continue;
      }
      parse_fail(path, lineno, "non-numeric field");
    }
    if (rows.empty()) {
      width = vals.size();
    } else if (vals.size() != width) {
      throw Error(ErrorCode::ShapeMismatch,
                  path + ":" + std::to_string(lineno) + ": ragged row");
    }
    rows.push_back(std::move(vals));
    first = false;
  }
  if (rows.empty()) parse_fail(path, lineno == 0 ? 1 : lineno, "no data rows");
  DenseMatrix m(static_cast<int>(rows.size()), static_cast<int>(width));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < width; ++j) {
      m(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    }
  }
  return m;
}

}  // namespace

DenseMatrix load_matrix(const std::string& path, MatrixFormat format) {
  DenseMatrix m = format == MatrixFormat::kMatrixMarket ? load_matrix_market(path)
                                                        : load_csv(path);
  if (!m.all_finite()) {
    throw Error(ErrorCode::ParseError, path + ": non-finite entries");
  }
  return m;
}

DenseMatrix load_matrix_auto(const std::string& path) {
  const auto dot = path.find_last_of('.');
  const std::string ext = dot == std::string::npos ? "" : lower(path.substr(dot + 1));
  const MatrixFormat fmt = (ext == "mtx" || ext == "mm") ? MatrixFormat::kMatrixMarket
                                                         : MatrixFormat::kCsv;
  return load_matrix(path, fmt);
}

void save_matrix_market(const std::string& path, const DenseMatrix& m) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << "%%MatrixMarket matrix array real general\n";
  out << m.rows() << " " << m.cols() << "\n";
  char buf[32];
  for (int j = 0; j < m.cols(); ++j) {
    for (int i = 0; i < m.rows(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      out << buf << "\n";
    }
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

void save_support(const std::string& path, const SupportMatrix& x) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << x.rows() << " " << x.cols() << "\n";
  char buf[32];
  for (int i = 0; i < x.rows(); ++i) {
    if (!x.has_entry(i)) continue;
    std::snprintf(buf, sizeof(buf), "%.17g", x.value(i));
    out << i << " " << x.col(i) << " " << buf << "\n";
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

SupportMatrix load_support(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::string line;
  long lineno = 0;
  if (!std::getline(in, line)) parse_fail(path, 1, "empty file");
  ++lineno;
  std::vector<std::string> toks = split_ws(line);
  long n = 0, p = 0;
  if (toks.size() != 2 || !parse_long(toks[0], n) || !parse_long(toks[1], p)) {
    parse_fail(path, lineno, "bad header, expected 'n p'");
  }
  std::vector<std::int32_t> cols(n, -1);
  std::vector<double> vals(n, 0.0);
  while (std::getline(in, line)) {
    ++lineno;
    toks = split_ws(line);
    if (toks.empty()) continue;
    long i = 0, j = 0;
    double v = 0.0;
    if (toks.size() != 3 || !parse_long(toks[0], i) || !parse_long(toks[1], j) ||
        !parse_double(toks[2], v)) {
      parse_fail(path, lineno, "bad support entry, expected 'row col value'");
    }
    if (i < 0 || i >= n || j < 0 || j >= p) {
      parse_fail(path, lineno, "index out of range");
    }
    cols[i] = static_cast<std::int32_t>(j);
    vals[i] = v;
  }
  return SupportMatrix(static_cast<int>(n), static_cast<int>(p), std::move(cols),
                       std::move(vals));
}

std::vector<int> load_labels_csv(const std::string& path) {
  DenseMatrix m = load_csv(path);
  if (m.cols() != 1) {
    throw Error(ErrorCode::ShapeMismatch, path + ": expected a single label column");
  }
  std::vector<int> labels(m.rows());
  for (int i = 0; i < m.rows(); ++i) labels[i] = static_cast<int>(m(i, 0));
  return labels;
}

}  // namespace sso
