#pragma once

// Random instance generators: the base k-sparse ensemble, pinning, the
// interpolation family and XORSAT right-hand sides.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "xorlab/galois.hpp"
#include "xorlab/linalg.hpp"
#include "xorlab/rng.hpp"
#include "xorlab/sparse_matrix.hpp"

namespace xorlab {

/// Source of the nonzero coefficients A_ij. Coefficients are a pure function of
/// (row, column), so a prefix of rows does not depend on how many rows follow.
struct CoefficientScheme {
  enum class Kind { all_ones, seeded_nonzero, explicit_table };

  Kind kind = Kind::all_ones;
  std::uint64_t seed = 0;
  std::vector<std::vector<std::uint32_t>> table;  // explicit_table: indexed (i mod R, j mod C)

  static CoefficientScheme all_ones() { return {}; }
  static CoefficientScheme seeded_nonzero(std::uint64_t seed) { return {Kind::seeded_nonzero, seed, {}}; }
  static CoefficientScheme explicit_table(std::vector<std::vector<std::uint32_t>> rows) {
    return {Kind::explicit_table, 0, std::move(rows)};
  }

  void validate(std::uint32_t q) const {
    if (kind != Kind::explicit_table) return;
    if (table.empty()) throw std::invalid_argument("explicit coefficient table is empty");
    const std::size_t width = table.front().size();
    for (const auto& r : table) {
      if (r.empty() || r.size() != width) throw std::invalid_argument("explicit coefficient table is ragged");
      for (auto v : r) {
        if (v == 0 || v >= q) throw std::invalid_argument("explicit coefficient outside GF(q)\\{0}");
      }
    }
  }

  std::uint32_t coefficient(std::uint64_t i, std::uint64_t j, std::uint32_t q) const {
    switch (kind) {
      case Kind::all_ones:
        return 1;
      case Kind::seeded_nonzero: {
        // rejection keeps the value exactly uniform on {1, .., q-1}
        const std::uint64_t span = q - 1;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
        for (std::uint64_t attempt = 0;; ++attempt) {
          const std::uint64_t h = hash_words(seed, i, j, attempt);
          if (h < limit) return static_cast<std::uint32_t>(1 + h % span);
        }
      }
      case Kind::explicit_table: {
        const auto& r = table[i % table.size()];
        return r[j % r.size()];
      }
    }
    return 1;
  }

  std::string name() const {
    switch (kind) {
      case Kind::all_ones:
        return "ones";
      case Kind::seeded_nonzero:
        return "seeded";
      case Kind::explicit_table:
        return "table";
    }
    return "ones";
  }
};

struct EnsembleParams {
  std::size_t n = 0;
  std::size_t k = 3;
  std::optional<std::size_t> m;  // row count; takes precedence over d
  std::optional<double> d;       // density, m = round(d n / k)
  std::uint64_t q = 2;
  CoefficientScheme scheme;
  std::uint64_t seed = 0;

  std::size_t rows() const {
    if (m) return *m;
    if (d) return static_cast<std::size_t>(std::llround(*d * static_cast<double>(n) / static_cast<double>(k)));
    throw std::invalid_argument("ensemble parameters need m or d");
  }

  /// Density d = k m / n (derived from m when d is not given).
  double density() const {
    if (d && !m) return *d;
    return n == 0 ? 0.0 : static_cast<double>(k) * static_cast<double>(rows()) / static_cast<double>(n);
  }

  void validate() const {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (k > n) throw std::invalid_argument("k = " + std::to_string(k) + " exceeds n = " + std::to_string(n));
    if (d && !(*d >= 0.0)) throw std::invalid_argument("density must be non-negative");
    if (n > std::numeric_limits<std::uint32_t>::max()) throw std::invalid_argument("n too large");
  }
};

/// Uniform k-subset of [n] by Floyd's algorithm: exactly k calls to below(),
/// with bounds n-k+1, ..., n. Returned sorted.
inline std::vector<std::uint32_t> sample_subset(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<std::uint32_t> s;
  s.reserve(k);
  for (std::size_t j = n - k; j < n; ++j) {
    const auto t = static_cast<std::uint32_t>(rng.below(j + 1));
    if (std::find(s.begin(), s.end(), t) == s.end()) {
      s.push_back(t);
    } else {
      s.push_back(static_cast<std::uint32_t>(j));
    }
  }
  std::sort(s.begin(), s.end());
  return s;
}

namespace detail {

inline void append_k_rows(SparseMatrix& a, std::size_t count, std::size_t k, const CoefficientScheme& scheme,
                          Rng& rng) {
  const std::uint32_t q = a.field().q();
  const std::size_t first = a.n_rows();
  for (std::size_t r = 0; r < count; ++r) {
    const auto cols = sample_subset(a.n_cols(), k, rng);
    SparseRow row;
    row.reserve(k);
    for (auto j : cols) row.push_back({j, Elem{scheme.coefficient(first + r, j, q)}});
    a.add_row_unchecked(std::move(row));
  }
}

inline void append_unary_rows(SparseMatrix& a, std::size_t count, Rng& rng) {
  for (std::size_t r = 0; r < count; ++r) {
    const auto j = static_cast<std::uint32_t>(rng.below(a.n_cols()));
    a.add_row_unchecked({{j, Elem{1}}});
  }
}

}  // namespace detail

/// Base ensemble: m rows, each supported on an independent uniform k-subset.
inline SparseMatrix gen_base(const EnsembleParams& p, Rng& rng) {
  p.validate();
  Field f = build_field(p.q);
  p.scheme.validate(f.q());
  SparseMatrix a(f, p.n);
  detail::append_k_rows(a, p.rows(), p.k, p.scheme, rng);
  return a;
}

/// A[t]: t extra rows, each a single 1 in a uniform column.
inline SparseMatrix pin(const SparseMatrix& a, std::size_t t, Rng& rng) {
  SparseMatrix out = a;
  if (t > 0 && a.n_cols() == 0) throw std::invalid_argument("cannot pin a matrix with no columns");
  detail::append_unary_rows(out, t, rng);
  return out;
}

/// T = ceil(ln n); natural logarithm.
inline std::size_t pin_range(std::size_t n) {
  return static_cast<std::size_t>(std::ceil(std::log(static_cast<double>(n))));
}

inline std::size_t draw_pin_count(std::size_t n, Rng& rng) {
  if (n < 2) throw std::invalid_argument("pinning needs n >= 2");
  return 1 + static_cast<std::size_t>(rng.below(pin_range(n)));
}

struct PinnedInstance {
  SparseMatrix matrix;
  std::size_t t = 0;
};

/// Base matrix, then t uniform in {1..ceil(ln n)}, then the t pins.
inline PinnedInstance gen_pinned(const EnsembleParams& p, Rng& rng) {
  SparseMatrix a = gen_base(p, rng);
  const std::size_t t = draw_pin_count(p.n, rng);
  detail::append_unary_rows(a, t, rng);
  return {std::move(a), t};
}

struct InterpolatedInstance {
  SparseMatrix matrix;
  std::size_t m_theta = 0;      // weight-k rows
  std::size_t m_unary = 0;      // unary rows
  std::size_t t = 0;            // pins
};

/// The family A(theta): Po((1-theta) d n / k) weight-k rows, Po(d theta alpha_f^(k-1) n)
/// unary rows, then pinning.
inline InterpolatedInstance gen_interpolated(const EnsembleParams& p, double theta, double alpha_f, Rng& rng) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in [0,1]");
  if (!(alpha_f >= 0.0 && alpha_f <= 1.0)) throw std::invalid_argument("alpha_f must lie in [0,1]");
  p.validate();
  const double d = p.density();
  const double n = static_cast<double>(p.n);
  const double k = static_cast<double>(p.k);
  Field f = build_field(p.q);
  p.scheme.validate(f.q());
  InterpolatedInstance out;
  out.m_theta = rng.poisson((1.0 - theta) * d * n / k);
  out.m_unary = rng.poisson(d * theta * std::pow(alpha_f, k - 1.0) * n);
  out.t = draw_pin_count(p.n, rng);
  out.matrix = SparseMatrix(f, p.n);
  detail::append_k_rows(out.matrix, out.m_theta, p.k, p.scheme, rng);
  detail::append_unary_rows(out.matrix, out.m_unary, rng);
  detail::append_unary_rows(out.matrix, out.t, rng);
  return out;
}

struct XorsatInstance {
  SparseMatrix matrix;
  std::vector<Elem> rhs;
};

/// Base matrix followed by an independent uniform right-hand side.
inline XorsatInstance xorsat_instance(const EnsembleParams& p, Rng& rng) {
  XorsatInstance out{gen_base(p, rng), {}};
  out.rhs.resize(out.matrix.n_rows());
  for (auto& y : out.rhs) y = Elem{static_cast<std::uint32_t>(rng.below(out.matrix.field().q()))};
  return out;
}

/// A sigma = y has a solution iff rank(A) = rank([A | y]).
inline bool is_solvable(const SparseMatrix& a, std::span<const Elem> y) {
  if (y.size() != a.n_rows()) throw std::invalid_argument("rhs length mismatch");
  SparseMatrix aug(a.field(), a.n_cols() + 1);
  for (std::size_t i = 0; i < a.n_rows(); ++i) {
    SparseRow r(a.row(i).begin(), a.row(i).end());
    if (!y[i].is_zero()) r.push_back({static_cast<std::uint32_t>(a.n_cols()), y[i]});
    aug.add_row_unchecked(std::move(r));
  }
  return rank(a) == rank(aug);
}

}  // namespace xorlab
