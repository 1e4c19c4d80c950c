#pragma once

// Dense packed row storage and elimination kernels.
//
// A row is a block of `stride()` 64-bit words. Layouts differ in how a field
// element is spread over those words:
//   Char2Layout  GF(2^e): e bit planes; multiplication by a constant is an
//                e x e matrix over GF(2) applied plane-wise (e = 1 is plain GF(2)).
//   Gf3Layout    GF(3): two planes, "is 1" and "is 2".
//   WideLayout   anything else: one element per word.
// All layouts expose the same interface so the eliminators below are written once.

#include <bit>
#include <cstdint>
#include <cstring>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "xorlab/galois.hpp"
#include "xorlab/sparse_matrix.hpp"

namespace xorlab::detail {

using Word = std::uint64_t;
inline constexpr std::size_t kNoColumn = std::numeric_limits<std::size_t>::max();

inline std::size_t words_for(std::size_t n_cols) { return (n_cols + 63) / 64; }

class Char2Layout {
 public:
  Char2Layout(const Field& f, std::size_t n_cols) : n_cols_(n_cols), wpp_(words_for(n_cols)), e_(f.e()) {
    // masks_[c*e + i] has bit j set iff coefficient i of c*x^j is 1.
    masks_.assign(static_cast<std::size_t>(f.q()) * e_, 0);
    for (std::uint32_t c = 1; c < f.q(); ++c) {
      for (std::uint32_t j = 0; j < e_; ++j) {
        const std::uint32_t prod = f.mul_raw(c, 1u << j);
        for (std::uint32_t i = 0; i < e_; ++i) {
          if ((prod >> i) & 1u) masks_[c * e_ + i] |= 1u << j;
        }
      }
    }
  }

  std::size_t stride() const { return wpp_ * e_; }
  std::size_t n_cols() const { return n_cols_; }

  std::uint32_t get(const Word* r, std::size_t j) const {
    std::uint32_t v = 0;
    for (std::uint32_t i = 0; i < e_; ++i) v |= static_cast<std::uint32_t>((r[i * wpp_ + (j >> 6)] >> (j & 63)) & 1u) << i;
    return v;
  }

  void set(Word* r, std::size_t j, std::uint32_t v) const {
    const Word bit = Word{1} << (j & 63);
    for (std::uint32_t i = 0; i < e_; ++i) {
      Word& w = r[i * wpp_ + (j >> 6)];
      w = ((v >> i) & 1u) ? (w | bit) : (w & ~bit);
    }
  }

  std::size_t find_nonzero(const Word* r, std::size_t from) const {
    if (from >= n_cols_) return kNoColumn;
    std::size_t w = from >> 6;
    Word mask = ~Word{0} << (from & 63);
    for (; w < wpp_; ++w, mask = ~Word{0}) {
      Word any = 0;
      for (std::uint32_t i = 0; i < e_; ++i) any |= r[i * wpp_ + w];
      any &= mask;
      if (any) return (w << 6) + static_cast<std::size_t>(std::countr_zero(any));
    }
    return kNoColumn;
  }

  /// dst += c * src on columns >= from (src must vanish below `from`).
  void axpy(Word* dst, std::uint32_t c, const Word* src, std::size_t from) const {
    const std::size_t w0 = from >> 6;
    if (e_ == 1) {
      for (std::size_t w = w0; w < wpp_; ++w) dst[w] ^= src[w];
      return;
    }
    for (std::uint32_t i = 0; i < e_; ++i) {
      Word* d = dst + i * wpp_;
      std::uint32_t m = masks_[c * e_ + i];
      while (m) {
        const int j = std::countr_zero(m);
        m &= m - 1;
        const Word* s = src + static_cast<std::size_t>(j) * wpp_;
        for (std::size_t w = w0; w < wpp_; ++w) d[w] ^= s[w];
      }
    }
  }

  void scale(Word* r, std::uint32_t c) const {
    if (c == 1) return;
    std::vector<Word> tmp(r, r + stride());
    std::memset(r, 0, stride() * sizeof(Word));
    axpy(r, c, tmp.data(), 0);
  }

 private:
  std::size_t n_cols_;
  std::size_t wpp_;
  std::uint32_t e_;
  std::vector<std::uint32_t> masks_;
};

class Gf3Layout {
 public:
  explicit Gf3Layout(std::size_t n_cols) : n_cols_(n_cols), wpp_(words_for(n_cols)) {}

  std::size_t stride() const { return 2 * wpp_; }
  std::size_t n_cols() const { return n_cols_; }

  std::uint32_t get(const Word* r, std::size_t j) const {
    const Word bit = Word{1} << (j & 63);
    if (r[j >> 6] & bit) return 1;
    if (r[wpp_ + (j >> 6)] & bit) return 2;
    return 0;
  }

  void set(Word* r, std::size_t j, std::uint32_t v) const {
    const Word bit = Word{1} << (j & 63);
    Word& ones = r[j >> 6];
    Word& twos = r[wpp_ + (j >> 6)];
    ones = (v == 1) ? (ones | bit) : (ones & ~bit);
    twos = (v == 2) ? (twos | bit) : (twos & ~bit);
  }

  std::size_t find_nonzero(const Word* r, std::size_t from) const {
    if (from >= n_cols_) return kNoColumn;
    std::size_t w = from >> 6;
    Word mask = ~Word{0} << (from & 63);
    for (; w < wpp_; ++w, mask = ~Word{0}) {
      const Word any = (r[w] | r[wpp_ + w]) & mask;
      if (any) return (w << 6) + static_cast<std::size_t>(std::countr_zero(any));
    }
    return kNoColumn;
  }

  void axpy(Word* dst, std::uint32_t c, const Word* src, std::size_t from) const {
    // c*src for c = 2 is src with its planes swapped.
    const Word* s1 = c == 1 ? src : src + wpp_;
    const Word* s2 = c == 1 ? src + wpp_ : src;
    Word* d1 = dst;
    Word* d2 = dst + wpp_;
    for (std::size_t w = from >> 6; w < wpp_; ++w) {
      const Word a1 = d1[w], a2 = d2[w], b1 = s1[w], b2 = s2[w];
      const Word na = ~(a1 | a2), nb = ~(b1 | b2);
      d1[w] = (a1 & nb) | (b1 & na) | (a2 & b2);
      d2[w] = (a2 & nb) | (b2 & na) | (a1 & b1);
    }
  }

  void scale(Word* r, std::uint32_t c) const {
    if (c == 2) {
      for (std::size_t w = 0; w < wpp_; ++w) std::swap(r[w], r[wpp_ + w]);
    }
  }

 private:
  std::size_t n_cols_;
  std::size_t wpp_;
};

class WideLayout {
 public:
  WideLayout(const Field& f, std::size_t n_cols) : f_(f), n_cols_(n_cols) {}

  std::size_t stride() const { return n_cols_; }
  std::size_t n_cols() const { return n_cols_; }
  std::uint32_t get(const Word* r, std::size_t j) const { return static_cast<std::uint32_t>(r[j]); }
  void set(Word* r, std::size_t j, std::uint32_t v) const { r[j] = v; }

  std::size_t find_nonzero(const Word* r, std::size_t from) const {
    for (std::size_t j = from; j < n_cols_; ++j) {
      if (r[j]) return j;
    }
    return kNoColumn;
  }

  void axpy(Word* dst, std::uint32_t c, const Word* src, std::size_t from) const {
    for (std::size_t j = from; j < n_cols_; ++j) {
      if (src[j]) {
        dst[j] = f_.add_raw(static_cast<std::uint32_t>(dst[j]), f_.mul_raw(c, static_cast<std::uint32_t>(src[j])));
      }
    }
  }

  void scale(Word* r, std::uint32_t c) const {
    for (std::size_t j = 0; j < n_cols_; ++j) {
      if (r[j]) r[j] = f_.mul_raw(c, static_cast<std::uint32_t>(r[j]));
    }
  }

 private:
  Field f_;
  std::size_t n_cols_;
};

/// Invokes fn with the fastest layout available for the field.
template <class Fn>
decltype(auto) with_layout(const Field& f, std::size_t n_cols, Fn&& fn) {
  if (f.p() == 2 && f.q() <= Field::kTableLimit) return fn(Char2Layout(f, n_cols));
  if (f.q() == 3) return fn(Gf3Layout(n_cols));
  return fn(WideLayout(f, n_cols));
}

template <class Layout>
void load_row(const Layout& layout, Word* dst, std::span<const Entry> row) {
  std::memset(dst, 0, layout.stride() * sizeof(Word));
  for (const auto& e : row) layout.set(dst, e.col, e.val.v);
}

template <class Layout>
SparseRow unload_row(const Layout& layout, const Word* src) {
  SparseRow out;
  for (std::size_t j = layout.find_nonzero(src, 0); j != kNoColumn; j = layout.find_nonzero(src, j + 1)) {
    out.push_back({static_cast<std::uint32_t>(j), Elem{layout.get(src, j)}});
  }
  return out;
}

struct DenseRref {
  std::vector<SparseRow> rows;  // nonzero rows of the reduced form, one per pivot
  std::vector<std::uint32_t> pivot_cols;
};

/// Gauss-Jordan elimination to reduced row echelon form with unit pivots.
/// Columns are scanned left to right; the pivot row is the first remaining row
/// (in original order) with a nonzero entry in the column.
template <class Layout>
DenseRref rref_dense(const Layout& layout, const Field& f, const SparseMatrix& a) {
  const std::size_t m = a.n_rows();
  const std::size_t stride = layout.stride();
  std::vector<Word> data(m * stride);
  for (std::size_t i = 0; i < m; ++i) load_row(layout, data.data() + i * stride, a.row(i));
  std::vector<Word*> rows(m);
  for (std::size_t i = 0; i < m; ++i) rows[i] = data.data() + i * stride;

  DenseRref out;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < a.n_cols() && rank < m; ++col) {
    std::size_t piv = kNoColumn;
    for (std::size_t i = rank; i < m; ++i) {
      if (layout.get(rows[i], col) != 0) {
        piv = i;
        break;
      }
    }
    if (piv == kNoColumn) continue;
    // Keep the remaining rows in original order.
    Word* prow = rows[piv];
    for (std::size_t i = piv; i > rank; --i) rows[i] = rows[i - 1];
    rows[rank] = prow;
    layout.scale(prow, f.inv_raw(layout.get(prow, col)));
    for (std::size_t i = 0; i < m; ++i) {
      if (i == rank) continue;
      const std::uint32_t v = layout.get(rows[i], col);
      if (v != 0) layout.axpy(rows[i], f.neg_raw(v), prow, col);
    }
    out.pivot_cols.push_back(static_cast<std::uint32_t>(col));
    ++rank;
  }
  out.rows.reserve(rank);
  for (std::size_t i = 0; i < rank; ++i) out.rows.push_back(unload_row(layout, rows[i]));
  return out;
}

/// Row-by-row echelon basis: rows are reduced against stored pivot rows (each
/// normalised to a leading 1) and kept if anything survives.
template <class Layout>
class IncrementalEchelon {
 public:
  IncrementalEchelon(Layout layout, Field f)
      : layout_(std::move(layout)), f_(std::move(f)), pivot_of_col_(layout_.n_cols(), kNone), work_(layout_.stride()) {}

  std::size_t rank() const { return n_pivots_; }

  /// Returns true iff the row is independent of all rows added so far.
  bool add(std::span<const Entry> row) {
    Word* w = work_.data();
    load_row(layout_, w, row);
    std::size_t col = layout_.find_nonzero(w, 0);
    while (col != kNoColumn) {
      const std::uint32_t piv = pivot_of_col_[col];
      if (piv == kNone) break;
      layout_.axpy(w, f_.neg_raw(layout_.get(w, col)), pivot_row(piv), col);
      col = layout_.find_nonzero(w, col + 1);
    }
    if (col == kNoColumn) return false;
    layout_.scale(w, f_.inv_raw(layout_.get(w, col)));
    store_.insert(store_.end(), work_.begin(), work_.end());
    pivot_of_col_[col] = static_cast<std::uint32_t>(n_pivots_++);
    return true;
  }

 private:
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  const Word* pivot_row(std::uint32_t idx) const { return store_.data() + static_cast<std::size_t>(idx) * layout_.stride(); }

  Layout layout_;
  Field f_;
  std::vector<std::uint32_t> pivot_of_col_;
  std::vector<Word> work_;
  std::vector<Word> store_;
  std::size_t n_pivots_ = 0;
};

}  // namespace xorlab::detail
