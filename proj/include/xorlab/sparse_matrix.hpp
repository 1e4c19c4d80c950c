#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "xorlab/error.hpp"
#include "xorlab/galois.hpp"

namespace xorlab {

struct Entry {
  std::uint32_t col = 0;
  Elem val;
  friend bool operator==(const Entry&, const Entry&) = default;
};

using SparseRow = std::vector<Entry>;

/// Row-sparse matrix over GF(q). Each row holds its nonzero entries sorted by
/// strictly increasing column index.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(Field field, std::size_t n_cols) : field_(std::move(field)), n_cols_(n_cols) {}

  SparseMatrix(Field field, std::size_t n_cols, std::vector<SparseRow> rows)
      : field_(std::move(field)), n_cols_(n_cols) {
    rows_.reserve(rows.size());
    for (auto& r : rows) add_row(std::move(r));
  }

  /// Dense constructor for small literal matrices (tests, examples).
  static SparseMatrix from_dense(Field field, const std::vector<std::vector<std::uint32_t>>& dense,
                                 std::size_t n_cols) {
    SparseMatrix a(std::move(field), n_cols);
    for (const auto& row : dense) {
      if (row.size() != n_cols) throw std::invalid_argument("dense row has wrong length");
      SparseRow r;
      for (std::size_t j = 0; j < n_cols; ++j) {
        if (row[j] != 0) r.push_back({static_cast<std::uint32_t>(j), a.field_.elem(row[j])});
      }
      a.add_row(std::move(r));
    }
    return a;
  }

  /// Appends a row, validating sortedness, range and nonzero coefficients.
  void add_row(SparseRow row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i].col >= n_cols_) throw std::out_of_range("column index out of range");
      if (row[i].val.is_zero()) throw std::invalid_argument("stored coefficient is zero");
      if (row[i].val.v >= field_.q()) throw std::invalid_argument("coefficient outside field");
      if (i > 0 && row[i].col <= row[i - 1].col) {
        throw std::invalid_argument("row columns must be strictly increasing");
      }
    }
    nnz_ += row.size();
    rows_.push_back(std::move(row));
  }

  /// Appends without validation; callers guarantee the row invariants.
  void add_row_unchecked(SparseRow row) {
    nnz_ += row.size();
    rows_.push_back(std::move(row));
  }

  const Field& field() const { return field_; }
  std::size_t n_rows() const { return rows_.size(); }
  std::size_t n_cols() const { return n_cols_; }
  std::size_t nnz() const { return nnz_; }
  std::span<const Entry> row(std::size_t i) const { return rows_[i]; }
  const std::vector<SparseRow>& rows() const { return rows_; }

  /// Column degrees (number of nonzeros per column).
  std::vector<std::uint32_t> col_degrees() const {
    std::vector<std::uint32_t> deg(n_cols_, 0);
    for (const auto& r : rows_) {
      for (const auto& e : r) ++deg[e.col];
    }
    return deg;
  }

  std::vector<std::vector<std::uint32_t>> to_dense() const {
    std::vector<std::vector<std::uint32_t>> out(rows_.size(), std::vector<std::uint32_t>(n_cols_, 0));
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      for (const auto& e : rows_[i]) out[i][e.col] = e.val.v;
    }
    return out;
  }

  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
    return a.field_.q() == b.field_.q() && a.n_cols_ == b.n_cols_ && a.rows_ == b.rows_;
  }

 private:
  Field field_;
  std::size_t n_cols_ = 0;
  std::size_t nnz_ = 0;
  std::vector<SparseRow> rows_;
};

/// A ⋅ x over the matrix field.
inline std::vector<Elem> multiply(const SparseMatrix& a, std::span<const Elem> x) {
  if (x.size() != a.n_cols()) throw std::invalid_argument("vector length mismatch");
  const Field& f = a.field();
  std::vector<Elem> y(a.n_rows());
  for (std::size_t i = 0; i < a.n_rows(); ++i) {
    std::uint32_t acc = 0;
    for (const auto& e : a.row(i)) acc = f.add_raw(acc, f.mul_raw(e.val.v, x[e.col].v));
    y[i] = Elem{acc};
  }
  return y;
}

/// Vertical concatenation [A; extra].
inline SparseMatrix stack_rows(const SparseMatrix& a, std::span<const SparseRow> extra) {
  SparseMatrix out = a;
  for (const auto& r : extra) out.add_row(r);
  return out;
}

inline SparseMatrix stack_rows(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.n_cols() != b.n_cols() || a.field().q() != b.field().q()) {
    throw std::invalid_argument("stack_rows: shape or field mismatch");
  }
  SparseMatrix out = a;
  for (const auto& r : b.rows()) out.add_row_unchecked(r);
  return out;
}

struct Minor {
  SparseMatrix matrix;
  std::vector<std::uint32_t> row_map;  // minor row -> original row
  std::vector<std::uint32_t> col_map;  // minor column -> original column
};

/// Deletes the given rows and columns, preserving the order of what remains.
inline Minor minor(const SparseMatrix& a, std::span<const std::uint32_t> removed_rows,
                   std::span<const std::uint32_t> removed_cols) {
  std::vector<char> drop_row(a.n_rows(), 0), drop_col(a.n_cols(), 0);
  for (auto i : removed_rows) {
    if (i >= a.n_rows()) throw std::out_of_range("minor: row index out of range");
    drop_row[i] = 1;
  }
  for (auto j : removed_cols) {
    if (j >= a.n_cols()) throw std::out_of_range("minor: column index out of range");
    drop_col[j] = 1;
  }
  Minor out;
  std::vector<std::uint32_t> new_index(a.n_cols(), 0);
  for (std::uint32_t j = 0; j < a.n_cols(); ++j) {
    if (!drop_col[j]) {
      new_index[j] = static_cast<std::uint32_t>(out.col_map.size());
      out.col_map.push_back(j);
    }
  }
  out.matrix = SparseMatrix(a.field(), out.col_map.size());
  for (std::uint32_t i = 0; i < a.n_rows(); ++i) {
    if (drop_row[i]) continue;
    SparseRow r;
    for (const auto& e : a.row(i)) {
      if (!drop_col[e.col]) r.push_back({new_index[e.col], e.val});
    }
    out.matrix.add_row_unchecked(std::move(r));
    out.row_map.push_back(i);
  }
  return out;
}

// Text format: header "M N q", then one "row col value" line per nonzero,
// sorted by row then column.
inline void write_matrix(std::ostream& os, const SparseMatrix& a) {
  os << a.n_rows() << ' ' << a.n_cols() << ' ' << a.field().q() << '\n';
  for (std::size_t i = 0; i < a.n_rows(); ++i) {
    for (const auto& e : a.row(i)) os << i << ' ' << e.col << ' ' << e.val.v << '\n';
  }
}

inline SparseMatrix read_matrix(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw IoError("matrix file is empty");
  std::istringstream header(line);
  std::uint64_t m = 0, n = 0, q = 0;
  if (!(header >> m >> n >> q)) throw IoError("malformed matrix header: '" + line + "'");
  Field field = Field::build(q);
  std::vector<SparseRow> rows(m);
  std::uint64_t i = 0, j = 0, v = 0;
  std::int64_t last_row = -1, last_col = -1;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (!(ls >> i >> j >> v)) throw IoError("malformed matrix entry: '" + line + "'");
    if (i >= m || j >= n || v == 0 || v >= q) throw IoError("matrix entry out of range: '" + line + "'");
    const auto si = static_cast<std::int64_t>(i), sj = static_cast<std::int64_t>(j);
    if (si < last_row || (si == last_row && sj <= last_col)) {
      throw IoError("matrix entries not sorted: '" + line + "'");
    }
    last_row = si;
    last_col = sj;
    rows[i].push_back({static_cast<std::uint32_t>(j), Elem{static_cast<std::uint32_t>(v)}});
  }
  return SparseMatrix(field, n, std::move(rows));
}

}  // namespace xorlab
