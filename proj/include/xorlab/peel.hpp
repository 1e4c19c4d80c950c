#pragma once

// 2-core pruning: while some column has at most one nonzero, delete it together
// with the row holding that nonzero (if any).

#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

#include "xorlab/rng.hpp"
#include "xorlab/sparse_matrix.hpp"

namespace xorlab {

struct PeelResult {
  SparseMatrix core;                        // the remaining minor
  std::vector<std::uint32_t> core_row_map;  // core row -> original row (increasing)
  std::vector<std::uint32_t> core_col_map;  // core column -> original column (increasing)
  std::vector<std::uint32_t> removed_cols;  // in removal order
  std::vector<std::uint32_t> removed_rows;  // in removal order
  std::size_t core_rows() const { return core.n_rows(); }
  std::size_t core_cols() const { return core.n_cols(); }
  std::int64_t excess() const {
    return static_cast<std::int64_t>(core_rows()) - static_cast<std::int64_t>(core_cols());
  }
};

namespace detail {

class Peeler {
 public:
  explicit Peeler(const SparseMatrix& a)
      : a_(a), deg_(a.col_degrees()), col_alive_(a.n_cols(), 1), row_alive_(a.n_rows(), 1), queued_(a.n_cols(), 0) {
    col_start_.assign(a.n_cols() + 1, 0);
    for (std::uint32_t j = 0; j < a.n_cols(); ++j) col_start_[j + 1] = col_start_[j] + deg_[j];
    col_rows_.resize(a.nnz());
    std::vector<std::size_t> fill(col_start_.begin(), col_start_.end() - 1);
    for (std::uint32_t i = 0; i < a.n_rows(); ++i) {
      for (const auto& e : a.row(i)) col_rows_[fill[e.col]++] = i;
    }
  }

  /// `pick` chooses the next column from the eligible pool; `push` adds to it.
  template <class Push, class Pick, class Empty>
  PeelResult run(Push push, Pick pick, Empty empty) {
    PeelResult out;
    for (std::uint32_t j = 0; j < a_.n_cols(); ++j) {
      if (deg_[j] <= 1) {
        queued_[j] = 1;
        push(j);
      }
    }
    while (!empty()) {
      const std::uint32_t j = pick();
      col_alive_[j] = 0;
      out.removed_cols.push_back(j);
      if (deg_[j] == 1) {
        std::uint32_t row = 0;
        for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k) {
          if (row_alive_[col_rows_[k]]) {
            row = col_rows_[k];
            break;
          }
        }
        row_alive_[row] = 0;
        out.removed_rows.push_back(row);
        for (const auto& e : a_.row(row)) {
          if (e.col == j || !col_alive_[e.col]) continue;
          if (--deg_[e.col] <= 1 && !queued_[e.col]) {
            queued_[e.col] = 1;
            push(e.col);
          }
        }
      }
      deg_[j] = 0;
    }
    std::vector<std::uint32_t> dead_rows, dead_cols;
    for (std::uint32_t i = 0; i < a_.n_rows(); ++i) {
      if (!row_alive_[i]) dead_rows.push_back(i);
    }
    for (std::uint32_t j = 0; j < a_.n_cols(); ++j) {
      if (!col_alive_[j]) dead_cols.push_back(j);
    }
    Minor m = minor(a_, dead_rows, dead_cols);
    out.core = std::move(m.matrix);
    out.core_row_map = std::move(m.row_map);
    out.core_col_map = std::move(m.col_map);
    return out;
  }

 private:
  const SparseMatrix& a_;
  std::vector<std::uint32_t> deg_;
  std::vector<char> col_alive_, row_alive_, queued_;
  std::vector<std::size_t> col_start_;
  std::vector<std::uint32_t> col_rows_;
};

}  // namespace detail

/// Canonical peeling: always removes the smallest-index eligible column.
inline PeelResult two_core(const SparseMatrix& a) {
  detail::Peeler peeler(a);
  std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> heap;
  return peeler.run([&](std::uint32_t j) { heap.push(j); },
                    [&] {
                      const auto j = heap.top();
                      heap.pop();
                      return j;
                    },
                    [&] { return heap.empty(); });
}

/// Peeling in a random order (uniform choice among eligible columns). The core
/// does not depend on the order; this exists to check exactly that.
inline PeelResult two_core_random_order(const SparseMatrix& a, Rng& rng) {
  detail::Peeler peeler(a);
  std::vector<std::uint32_t> pool;
  return peeler.run([&](std::uint32_t j) { pool.push_back(j); },
                    [&] {
                      const auto k = rng.below(pool.size());
                      const auto j = pool[k];
                      pool[k] = pool.back();
                      pool.pop_back();
                      return j;
                    },
                    [&] { return pool.empty(); });
}

/// core_rows - core_cols. Positive values certify that A lacks full row rank.
inline std::int64_t core_excess(const SparseMatrix& a) { return two_core(a).excess(); }

}  // namespace xorlab
