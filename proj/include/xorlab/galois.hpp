#pragma once

// Exact arithmetic in GF(q), q = p^e.
//
// Elements are encoded as integers in [0, q): the coefficient vector of the
// residue polynomial read as base-p digits, lowest degree first. For e = 1 this
// is the usual residue mod p.

#include <compare>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace xorlab {

struct Elem {
  std::uint32_t v = 0;

  constexpr Elem() = default;
  constexpr explicit Elem(std::uint32_t value) : v(value) {}
  constexpr bool is_zero() const { return v == 0; }
  friend constexpr auto operator<=>(Elem, Elem) = default;
};

namespace detail {

using Poly = std::vector<std::uint32_t>;  // coefficients over GF(p), low-order first

inline void poly_trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) r = r * base % m;
    base = base * base % m;
    exp >>= 1;
  }
  return r;
}

// Remainder of a modulo a monic divisor b over GF(p).
inline Poly poly_mod(Poly a, const Poly& b, std::uint32_t p) {
  poly_trim(a);
  const std::size_t db = b.size() - 1;
  while (a.size() >= b.size()) {
    const std::uint64_t lead = a.back();
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i) {
      const std::uint64_t sub = lead * b[i] % p;
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - sub) % p);
    }
    poly_trim(a);
  }
  return a;
}

// Monic polynomial of degree `deg` whose lower coefficients are the base-p digits of `index`.
inline Poly monic_from_index(std::uint64_t index, std::size_t deg, std::uint32_t p) {
  Poly f(deg + 1, 0);
  for (std::size_t i = 0; i < deg; ++i) {
    f[i] = static_cast<std::uint32_t>(index % p);
    index /= p;
  }
  f[deg] = 1;
  return f;
}

inline std::uint64_t ipow(std::uint64_t b, std::size_t e) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= b;
  return r;
}

/// Trial division by every monic polynomial of degree 1..deg/2.
inline bool is_irreducible(const Poly& f, std::uint32_t p) {
  const std::size_t deg = f.size() - 1;
  for (std::size_t dd = 1; dd <= deg / 2; ++dd) {
    const std::uint64_t count = ipow(p, dd);
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      if (poly_mod(f, monic_from_index(idx, dd, p), p).empty()) return false;
    }
  }
  return true;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

struct FieldData {
  std::uint32_t p = 2;
  std::uint32_t e = 1;
  std::uint32_t q = 2;
  Poly modulus;                    // monic, degree e
  std::vector<std::uint32_t> exp;  // exp[i] = g^i, length 2(q-1); extension fields with tables
  std::vector<std::uint32_t> log;  // log[a] for a != 0
  bool tables = false;
};

}  // namespace detail

/// Finite field GF(q). A cheap, immutable, thread-safe handle; copies share tables.
class Field {
 public:
  /// Largest extension-field order accepted. Tables are used up to kTableLimit,
  /// schoolbook multiplication with reduction above it.
  static constexpr std::uint32_t kTableLimit = 1u << 16;
  static constexpr std::uint32_t kMaxExtensionOrder = 1u << 24;
  static constexpr std::uint64_t kMaxPrime = (1ull << 31) - 1;

  /// Builds GF(q) with the lexicographically smallest monic irreducible modulus,
  /// where candidates are ordered by the base-p integer formed from their lower
  /// coefficients. Deterministic in q.
  static Field build(std::uint64_t q);

  Field() : Field(build(2)) {}

  std::uint32_t p() const { return d_->p; }
  std::uint32_t e() const { return d_->e; }
  std::uint32_t q() const { return d_->q; }
  const std::vector<std::uint32_t>& modulus() const { return d_->modulus; }
  bool uses_tables() const { return d_->tables; }

  Elem zero() const { return Elem{0}; }
  Elem one() const { return Elem{1}; }
  Elem elem(std::uint64_t v) const {
    if (v >= q()) throw std::out_of_range("field element out of range");
    return Elem{static_cast<std::uint32_t>(v)};
  }

  Elem add(Elem a, Elem b) const { return Elem{add_raw(a.v, b.v)}; }
  Elem sub(Elem a, Elem b) const { return Elem{add_raw(a.v, neg_raw(b.v))}; }
  Elem neg(Elem a) const { return Elem{neg_raw(a.v)}; }
  Elem mul(Elem a, Elem b) const { return Elem{mul_raw(a.v, b.v)}; }
  Elem inv(Elem a) const { return Elem{inv_raw(a.v)}; }
  Elem div(Elem a, Elem b) const { return Elem{mul_raw(a.v, inv_raw(b.v))}; }
  Elem pow(Elem a, std::int64_t n) const;

  // Raw-integer variants for hot loops. Operands must be in [0, q).
  std::uint32_t add_raw(std::uint32_t a, std::uint32_t b) const {
    const auto& d = *d_;
    if (d.e == 1) {
      const std::uint64_t s = std::uint64_t{a} + b;
      return static_cast<std::uint32_t>(s >= d.p ? s - d.p : s);
    }
    if (d.p == 2) return a ^ b;
    std::uint32_t r = 0, place = 1;
    for (std::uint32_t i = 0; i < d.e; ++i) {
      const std::uint32_t s = (a % d.p + b % d.p) % d.p;
      r += s * place;
      place *= d.p;
      a /= d.p;
      b /= d.p;
    }
    return r;
  }

  std::uint32_t neg_raw(std::uint32_t a) const {
    const auto& d = *d_;
    if (d.e == 1) return a == 0 ? 0 : d.p - a;
    if (d.p == 2) return a;
    std::uint32_t r = 0, place = 1;
    for (std::uint32_t i = 0; i < d.e; ++i) {
      const std::uint32_t c = a % d.p;
      r += (c == 0 ? 0 : d.p - c) * place;
      place *= d.p;
      a /= d.p;
    }
    return r;
  }

  std::uint32_t mul_raw(std::uint32_t a, std::uint32_t b) const {
    const auto& d = *d_;
    if (a == 0 || b == 0) return 0;
    if (d.e == 1) return static_cast<std::uint32_t>(std::uint64_t{a} * b % d.p);
    if (d.tables) return d.exp[d.log[a] + d.log[b]];
    return schoolbook_mul(a, b);
  }

  std::uint32_t inv_raw(std::uint32_t a) const {
    const auto& d = *d_;
    if (a == 0) throw std::domain_error("inverse of zero in GF(" + std::to_string(d.q) + ")");
    if (d.e == 1) return static_cast<std::uint32_t>(detail::mod_pow(a, d.p - 2, d.p));
    if (d.tables) return d.exp[(d.q - 1 - d.log[a]) % (d.q - 1)];
    return pow(Elem{a}, static_cast<std::int64_t>(d.q) - 2).v;
  }

  /// Base-p digits of an element (polynomial coefficients, low-order first).
  std::vector<std::uint32_t> digits(Elem a) const {
    std::vector<std::uint32_t> out(e());
    std::uint32_t v = a.v;
    for (auto& c : out) {
      c = v % p();
      v /= p();
    }
    return out;
  }

  friend bool operator==(const Field& a, const Field& b) { return a.q() == b.q(); }

 private:
  explicit Field(std::shared_ptr<const detail::FieldData> d) : d_(std::move(d)) {}

  std::uint32_t schoolbook_mul(std::uint32_t a, std::uint32_t b) const {
    const auto& d = *d_;
    detail::Poly pa(d.e), pb(d.e);
    for (std::uint32_t i = 0; i < d.e; ++i) {
      pa[i] = a % d.p;
      a /= d.p;
      pb[i] = b % d.p;
      b /= d.p;
    }
    detail::Poly prod(2 * d.e - 1, 0);
    for (std::uint32_t i = 0; i < d.e; ++i) {
      for (std::uint32_t j = 0; j < d.e; ++j) {
        prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + std::uint64_t{pa[i]} * pb[j]) % d.p);
      }
    }
    const detail::Poly r = detail::poly_mod(prod, d.modulus, d.p);
    std::uint32_t out = 0, place = 1;
    for (std::size_t i = 0; i < r.size(); ++i) {
      out += r[i] * place;
      place *= d.p;
    }
    return out;
  }

  std::shared_ptr<const detail::FieldData> d_;
};

inline Elem Field::pow(Elem a, std::int64_t n) const {
  if (n < 0) {
    a = inv(a);
    n = -n;
  }
  Elem r = one();
  while (n > 0) {
    if (n & 1) r = mul(r, a);
    a = mul(a, a);
    n >>= 1;
  }
  return r;
}

inline Field Field::build(std::uint64_t q) {
  if (q < 2) throw std::invalid_argument("field order must be >= 2");
  std::uint64_t p = 0;
  for (std::uint64_t d = 2; d * d <= q; ++d) {
    if (q % d == 0) {
      p = d;
      break;
    }
  }
  if (p == 0) p = q;
  std::uint32_t e = 0;
  std::uint64_t rest = q;
  while (rest % p == 0) {
    rest /= p;
    ++e;
  }
  if (rest != 1) throw std::invalid_argument(std::to_string(q) + " is not a prime power");
  if (e == 1 && p > kMaxPrime) throw std::invalid_argument("prime field order too large");
  if (e > 1 && q > kMaxExtensionOrder) {
    throw std::invalid_argument("extension field order " + std::to_string(q) + " exceeds limit");
  }

  auto data = std::make_shared<detail::FieldData>();
  data->p = static_cast<std::uint32_t>(p);
  data->e = e;
  data->q = static_cast<std::uint32_t>(q);
  if (e == 1) {
    data->modulus = {0, 1};  // x; arithmetic is plain residues mod p
  } else {
    const std::uint64_t candidates = detail::ipow(p, e);
    for (std::uint64_t idx = 0; idx < candidates; ++idx) {
      auto f = detail::monic_from_index(idx, e, data->p);
      if (f[0] == 0) continue;
      if (detail::is_irreducible(f, data->p)) {
        data->modulus = std::move(f);
        break;
      }
    }
  }
  Field field(data);
  if (e > 1 && q <= kTableLimit) {
    // Primitive element: order q-1, checked against every prime factor of q-1.
    std::vector<std::uint64_t> factors;
    std::uint64_t r = q - 1;
    for (std::uint64_t f = 2; f * f <= r; ++f) {
      if (r % f == 0) {
        factors.push_back(f);
        while (r % f == 0) r /= f;
      }
    }
    if (r > 1) factors.push_back(r);
    std::uint32_t gen = 0;
    for (std::uint32_t c = 2; c < q && gen == 0; ++c) {
      bool primitive = true;
      for (auto f : factors) {
        if (field.pow(Elem{c}, static_cast<std::int64_t>((q - 1) / f)) == field.one()) {
          primitive = false;
          break;
        }
      }
      if (primitive) gen = c;
    }
    data->exp.resize(2 * (q - 1));
    data->log.assign(q, 0);
    std::uint32_t x = 1;
    for (std::uint32_t i = 0; i < 2 * (q - 1); ++i) {
      data->exp[i] = x;
      if (i < q - 1) data->log[x] = i;
      x = field.schoolbook_mul(x, gen);
    }
    data->tables = true;
  }
  return field;
}

/// build_field(q): see Field::build.
inline Field build_field(std::uint64_t q) { return Field::build(q); }

}  // namespace xorlab
