#pragma once

// Brute-force reference implementations used by the tests. They only rely on
// field arithmetic, never on the library's elimination or peeling code.

#include <cstdint>
#include <functional>
#include <set>
#include <vector>

#include "xorlab/galois.hpp"
#include "xorlab/rng.hpp"
#include "xorlab/sparse_matrix.hpp"

namespace oracle {

using xorlab::Elem;
using xorlab::Field;
using xorlab::SparseMatrix;
using Vec = std::vector<std::uint32_t>;

// Calls fn for every vector in GF(q)^n (odometer order).
inline void for_each_vector(std::size_t n, std::uint32_t q, const std::function<void(const Vec&)>& fn) {
  Vec x(n, 0);
  for (;;) {
    fn(x);
    std::size_t i = 0;
    while (i < n && ++x[i] == q) x[i++] = 0;
    if (i == n) return;
  }
}

inline Vec apply(const SparseMatrix& a, const Vec& x) {
  const Field& f = a.field();
  Vec out(a.n_rows(), 0);
  for (std::size_t i = 0; i < a.n_rows(); ++i) {
    for (const auto& e : a.row(i)) out[i] = f.add_raw(out[i], f.mul_raw(e.val.v, x[e.col]));
  }
  return out;
}

inline bool is_zero(const Vec& v) {
  for (auto x : v) {
    if (x) return false;
  }
  return true;
}

inline std::vector<Vec> kernel(const SparseMatrix& a) {
  std::vector<Vec> out;
  for_each_vector(a.n_cols(), a.field().q(), [&](const Vec& x) {
    if (is_zero(apply(a, x))) out.push_back(x);
  });
  return out;
}

inline std::size_t log_q(std::size_t count, std::uint32_t q) {
  std::size_t e = 0;
  while (count > 1) {
    count /= q;
    ++e;
  }
  return e;
}

inline std::size_t nullity(const SparseMatrix& a) { return log_q(kernel(a).size(), a.field().q()); }
inline std::size_t rank(const SparseMatrix& a) { return a.n_cols() - nullity(a); }

inline std::set<std::uint32_t> frozen(const SparseMatrix& a) {
  std::set<std::uint32_t> out;
  const auto ker = kernel(a);
  for (std::uint32_t j = 0; j < a.n_cols(); ++j) {
    bool all_zero = true;
    for (const auto& x : ker) all_zero = all_zero && x[j] == 0;
    if (all_zero) out.insert(j);
  }
  return out;
}

// Row-space vectors y^T A for every y.
inline std::vector<Vec> row_space(const SparseMatrix& a) {
  const Field& f = a.field();
  std::vector<Vec> out;
  for_each_vector(a.n_rows(), f.q(), [&](const Vec& y) {
    Vec v(a.n_cols(), 0);
    for (std::size_t i = 0; i < a.n_rows(); ++i) {
      if (!y[i]) continue;
      for (const auto& e : a.row(i)) v[e.col] = f.add_raw(v[e.col], f.mul_raw(y[i], e.val.v));
    }
    out.push_back(std::move(v));
  });
  return out;
}

// Some nonzero row-space vector is supported inside cols.
inline bool is_relation(const std::vector<Vec>& rs, const std::set<std::uint32_t>& cols) {
  for (const auto& v : rs) {
    if (is_zero(v)) continue;
    bool inside = true;
    for (std::uint32_t j = 0; j < v.size() && inside; ++j) inside = v[j] == 0 || cols.contains(j);
    if (inside) return true;
  }
  return false;
}

inline SparseMatrix random_matrix(const Field& f, std::size_t m, std::size_t n, double density, xorlab::Rng& rng) {
  SparseMatrix a(f, n);
  for (std::size_t i = 0; i < m; ++i) {
    xorlab::SparseRow row;
    for (std::uint32_t j = 0; j < n; ++j) {
      if (rng.uniform01() < density) row.push_back({j, Elem{static_cast<std::uint32_t>(1 + rng.below(f.q() - 1))}});
    }
    a.add_row(std::move(row));
  }
  return a;
}

// Polynomial product mod the field modulus, on base-p digit vectors.
inline std::uint32_t poly_mul(const Field& f, std::uint32_t a, std::uint32_t b) {
  const std::uint32_t p = f.p(), e = f.e();
  const auto da = f.digits(Elem{a}), db = f.digits(Elem{b});
  std::vector<std::uint64_t> prod(2 * e, 0);
  for (std::uint32_t i = 0; i < e; ++i) {
    for (std::uint32_t j = 0; j < e; ++j) prod[i + j] = (prod[i + j] + std::uint64_t{da[i]} * db[j]) % p;
  }
  if (e > 1) {
    const auto& mod = f.modulus();  // monic, degree e, low-order first
    for (std::size_t d = 2 * e - 1; d >= e; --d) {
      const std::uint64_t c = prod[d];
      if (!c) continue;
      for (std::uint32_t i = 0; i <= e; ++i) prod[d - e + i] = (prod[d - e + i] + (p - c) * mod[i]) % p;
    }
  }
  std::uint32_t out = 0, place = 1;
  for (std::uint32_t i = 0; i < e; ++i) {
    out += static_cast<std::uint32_t>(prod[i]) * place;
    place *= p;
  }
  return out;
}

}  // namespace oracle
