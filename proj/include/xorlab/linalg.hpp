#pragma once

// Exact linear algebra over GF(q) on SparseMatrix: reduced echelon form, rank,
// kernels, frozen coordinates, relations and kernel sampling.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "xorlab/detail/packed.hpp"
#include "xorlab/error.hpp"
#include "xorlab/peel.hpp"
#include "xorlab/rng.hpp"
#include "xorlab/sparse_matrix.hpp"

namespace xorlab {

struct Rref {
  SparseMatrix reduced;  // nonzero rows only; row r has its leading 1 at pivot_cols[r]
  std::size_t rank = 0;
  std::vector<std::uint32_t> pivot_cols;
};

/// Reduced row echelon form. Unique for a given matrix, so pivot and free
/// columns do not depend on how the elimination is carried out.
inline Rref rref(const SparseMatrix& a) {
  detail::DenseRref d = detail::with_layout(a.field(), a.n_cols(), [&](const auto& layout) {
    return detail::rref_dense(layout, a.field(), a);
  });
  Rref out;
  out.rank = d.pivot_cols.size();
  out.pivot_cols = std::move(d.pivot_cols);
  out.reduced = SparseMatrix(a.field(), a.n_cols());
  for (auto& r : d.rows) out.reduced.add_row_unchecked(std::move(r));
  return out;
}

namespace detail {

// Calls visit(bool independent) for each row of `rows`, in order, stopping when
// visit returns false.
template <class Visit>
void echelon_scan(const SparseMatrix& rows, Visit visit) {
  with_layout(rows.field(), rows.n_cols(), [&](const auto& layout) {
    IncrementalEchelon ech(layout, rows.field());
    for (std::size_t i = 0; i < rows.n_rows(); ++i) {
      if (!visit(i, ech.add(rows.row(i)))) break;
    }
    return 0;
  });
}

}  // namespace detail

/// Rank via 2-core peeling followed by elimination on the core. Each peeled
/// degree-one column carries a row that is independent of all others, so
/// rank(A) = #peeled rows + rank(core).
inline std::size_t rank(const SparseMatrix& a) {
  PeelResult p = two_core(a);
  std::size_t r = p.removed_rows.size();
  detail::echelon_scan(p.core, [&](std::size_t, bool independent) {
    r += independent ? 1 : 0;
    return true;
  });
  return r;
}

inline std::size_t nullity(const SparseMatrix& a) { return a.n_cols() - rank(a); }

/// Length of the longest prefix of rows that is linearly independent.
/// Peeling commutes with taking prefixes: a column of degree <= 1 in A has
/// degree <= 1 in every prefix, and its row (if inside the prefix) is
/// independent there. So prefix i is independent iff the core rows with
/// original index < i are.
inline std::size_t full_rank_prefix(const SparseMatrix& a) {
  PeelResult p = two_core(a);
  std::size_t result = a.n_rows();
  detail::echelon_scan(p.core, [&](std::size_t i, bool independent) {
    if (!independent) {
      result = p.core_row_map[i];
      return false;
    }
    return true;
  });
  return result;
}

struct KernelBasis {
  std::size_t dimension = 0;
  std::vector<std::vector<Elem>> basis;  // one N-vector per free column
  std::vector<std::uint32_t> pivot_cols;
  std::vector<std::uint32_t> free_cols;
};

inline std::vector<std::uint32_t> free_columns(std::size_t n_cols, std::span<const std::uint32_t> pivots) {
  std::vector<char> is_pivot(n_cols, 0);
  for (auto c : pivots) is_pivot[c] = 1;
  std::vector<std::uint32_t> out;
  for (std::uint32_t j = 0; j < n_cols; ++j) {
    if (!is_pivot[j]) out.push_back(j);
  }
  return out;
}

/// Basis vector for free column f: 1 at f, -R[r][f] at the pivot of each reduced row r.
inline KernelBasis kernel_basis(const SparseMatrix& a) {
  const Rref r = rref(a);
  const Field& f = a.field();
  KernelBasis kb;
  kb.pivot_cols = r.pivot_cols;
  kb.free_cols = free_columns(a.n_cols(), r.pivot_cols);
  kb.dimension = kb.free_cols.size();
  std::vector<std::uint32_t> free_index(a.n_cols(), 0);
  for (std::uint32_t t = 0; t < kb.free_cols.size(); ++t) free_index[kb.free_cols[t]] = t;
  kb.basis.assign(kb.dimension, std::vector<Elem>(a.n_cols()));
  for (std::uint32_t t = 0; t < kb.dimension; ++t) kb.basis[t][kb.free_cols[t]] = f.one();
  for (std::size_t row = 0; row < r.rank; ++row) {
    const std::uint32_t pc = r.pivot_cols[row];
    for (const auto& e : r.reduced.row(row)) {
      if (e.col != pc) kb.basis[free_index[e.col]][pc] = f.neg(e.val);
    }
  }
  return kb;
}

/// F(A): columns j with sigma_j = 0 for every kernel vector. Exactly the pivot
/// columns whose reduced row is a unit vector.
inline std::vector<std::uint32_t> frozen_set(const Rref& r) {
  std::vector<std::uint32_t> out;
  for (std::size_t row = 0; row < r.rank; ++row) {
    if (r.reduced.row(row).size() == 1) out.push_back(r.pivot_cols[row]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<std::uint32_t> frozen_set(const SparseMatrix& a) { return frozen_set(rref(a)); }

namespace detail {

inline std::vector<std::uint32_t> normalized_column_set(std::span<const std::uint32_t> cols, std::size_t n) {
  std::vector<std::uint32_t> out(cols.begin(), cols.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  for (auto j : out) {
    if (j >= n) throw std::out_of_range("column set index out of range");
  }
  return out;
}

}  // namespace detail

/// J is a relation iff some y gives supp(y^T A) a nonempty subset of J.
/// Decided by comparing the left kernels of A and of A with the columns of J
/// removed: dim{y : y^T A_{-J} = 0} > dim{y : y^T A = 0}  <=>  rank(A) > rank(A_{-J}).
inline bool is_relation(const SparseMatrix& a, std::span<const std::uint32_t> cols) {
  if (cols.empty()) throw std::invalid_argument("is_relation: empty column set");
  const auto j = detail::normalized_column_set(cols, a.n_cols());
  return rank(a) > rank(minor(a, {}, j).matrix);
}

/// J \ F(A) is a relation; the empty set is never a relation.
inline bool is_proper_relation(const SparseMatrix& a, std::span<const std::uint32_t> cols) {
  if (cols.empty()) throw std::invalid_argument("is_proper_relation: empty column set");
  const auto j = detail::normalized_column_set(cols, a.n_cols());
  const auto frozen = frozen_set(a);
  std::vector<std::uint32_t> rest;
  std::set_difference(j.begin(), j.end(), frozen.begin(), frozen.end(), std::back_inserter(rest));
  if (rest.empty()) return false;
  return is_relation(a, rest);
}

struct FreenessReport {
  bool is_free = true;
  double delta = 0.0;
  std::size_t ell = 0;
  std::vector<std::uint64_t> counts;  // counts[h] = proper relations of size h (h < 2 unused)
  std::vector<double> limits;         // limits[h] = delta * C(N, h)
};

inline double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

namespace detail {

// Rank of a handful of vectors (Gaussian elimination on copies).
inline std::size_t small_rank(const Field& f, std::vector<std::vector<std::uint32_t>> v) {
  std::size_t rank = 0;
  const std::size_t len = v.empty() ? 0 : v[0].size();
  for (std::size_t col = 0; col < len && rank < v.size(); ++col) {
    std::size_t piv = rank;
    while (piv < v.size() && v[piv][col] == 0) ++piv;
    if (piv == v.size()) continue;
    std::swap(v[piv], v[rank]);
    const std::uint32_t inv = f.inv_raw(v[rank][col]);
    for (std::size_t i = rank + 1; i < v.size(); ++i) {
      if (v[i][col] == 0) continue;
      const std::uint32_t c = f.neg_raw(f.mul_raw(v[i][col], inv));
      for (std::size_t k = col; k < len; ++k) v[i][k] = f.add_raw(v[i][k], f.mul_raw(c, v[rank][k]));
    }
    ++rank;
  }
  return rank;
}

}  // namespace detail

/// Exhaustive count of proper relations of each size h in [2, ell].
///
/// Uses the dual description: a column set S supports a nonzero vector of the
/// row space iff the kernel coordinates {B_j : j in S} are linearly dependent,
/// where B_j in GF(q)^nul is column j's entry across a kernel basis. Proper
/// relations of J are then dependence of the nonfrozen part of J.
inline FreenessReport freeness_audit(const SparseMatrix& a, double delta, std::size_t ell,
                                     double budget = 1e7) {
  if (ell < 2) throw std::invalid_argument("freeness_audit: ell must be >= 2");
  const std::size_t n = a.n_cols();
  if (std::pow(static_cast<double>(n), static_cast<double>(ell)) > budget) {
    throw BudgetExceeded("freeness_audit: N^ell = " + std::to_string(std::pow(double(n), double(ell))) +
                         " exceeds budget " + std::to_string(budget));
  }
  const KernelBasis kb = kernel_basis(a);
  std::vector<std::vector<std::uint32_t>> coord(n, std::vector<std::uint32_t>(kb.dimension, 0));
  std::vector<char> frozen(n, 1);
  for (std::size_t t = 0; t < kb.dimension; ++t) {
    for (std::size_t j = 0; j < n; ++j) {
      coord[j][t] = kb.basis[t][j].v;
      if (coord[j][t]) frozen[j] = 0;
    }
  }
  FreenessReport rep;
  rep.delta = delta;
  rep.ell = ell;
  rep.counts.assign(ell + 1, 0);
  rep.limits.assign(ell + 1, 0.0);
  for (std::size_t h = 2; h <= ell && h <= n; ++h) {
    std::vector<std::uint32_t> idx(h);
    for (std::size_t i = 0; i < h; ++i) idx[i] = static_cast<std::uint32_t>(i);
    std::uint64_t count = 0;
    for (;;) {
      std::vector<std::vector<std::uint32_t>> vecs;
      for (auto j : idx) {
        if (!frozen[j]) vecs.push_back(coord[j]);
      }
      if (!vecs.empty() && detail::small_rank(a.field(), vecs) < vecs.size()) ++count;
      // next combination
      std::size_t i = h;
      while (i > 0 && idx[i - 1] == n - h + (i - 1)) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t k = i; k < h; ++k) idx[k] = idx[k - 1] + 1;
    }
    rep.counts[h] = count;
    rep.limits[h] = delta * binomial(n, h);
    if (static_cast<double>(count) >= rep.limits[h]) rep.is_free = false;
  }
  return rep;
}

/// Uniform sampler over ker A: free coordinates (increasing column order) get
/// independent uniform values, pivot coordinates are back-substituted.
class KernelSampler {
 public:
  explicit KernelSampler(const SparseMatrix& a) : KernelSampler(a.field(), a.n_cols(), rref(a)) {}

  KernelSampler(Field f, std::size_t n_cols, Rref r)
      : f_(std::move(f)), n_(n_cols), rref_(std::move(r)), free_(free_columns(n_cols, rref_.pivot_cols)) {}

  std::size_t nullity() const { return free_.size(); }
  const Rref& reduced() const { return rref_; }

  std::vector<Elem> sample(Rng& rng) const {
    std::vector<Elem> x(n_);
    for (auto j : free_) x[j] = Elem{static_cast<std::uint32_t>(rng.below(f_.q()))};
    for (std::size_t row = 0; row < rref_.rank; ++row) {
      const std::uint32_t pc = rref_.pivot_cols[row];
      std::uint32_t acc = 0;
      for (const auto& e : rref_.reduced.row(row)) {
        if (e.col != pc) acc = f_.add_raw(acc, f_.mul_raw(e.val.v, x[e.col].v));
      }
      x[pc] = Elem{f_.neg_raw(acc)};
    }
    return x;
  }

 private:
  Field f_;
  std::size_t n_;
  Rref rref_;
  std::vector<std::uint32_t> free_;
};

inline std::vector<Elem> sample_kernel(const SparseMatrix& a, Rng& rng) { return KernelSampler(a).sample(rng); }

enum class Norm { l1, l2 };

struct BalanceProfile {
  std::vector<double> freq;  // freq[s] = fraction of coordinates equal to s
  std::size_t n = 0;

  double distance(Norm norm) const {
    const double u = 1.0 / static_cast<double>(freq.size());
    double acc = 0.0;
    for (double r : freq) {
      const double d = std::fabs(r - u);
      acc += norm == Norm::l1 ? d : d * d;
    }
    return norm == Norm::l1 ? acc : std::sqrt(acc);
  }
};

inline BalanceProfile balance_profile(std::span<const Elem> sigma, std::uint32_t q) {
  if (sigma.empty()) throw std::invalid_argument("balance_profile: empty vector");
  std::vector<std::size_t> counts(q, 0);
  for (auto s : sigma) ++counts.at(s.v);
  BalanceProfile bp;
  bp.n = sigma.size();
  bp.freq.resize(q);
  for (std::uint32_t s = 0; s < q; ++s) bp.freq[s] = static_cast<double>(counts[s]) / static_cast<double>(bp.n);
  return bp;
}

/// ||rho(sigma) - 1/q||, l1 or l2.
inline double balance_distance(std::span<const Elem> sigma, std::uint32_t q, Norm norm = Norm::l2) {
  return balance_profile(sigma, q).distance(norm);
}

}  // namespace xorlab
