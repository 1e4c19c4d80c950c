#pragma once

// Closed-form threshold machinery for the fixed-point map
//   phi(a) = 1 - exp(-d a^(k-1))
// and its potential
//   Phi(a) = exp(-d a^(k-1)) + d a^(k-1) - d (k-1) a^k / k - d / k,
// together with the predicted Warning Propagation statistics.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "xorlab/error.hpp"
#include "xorlab/galois.hpp"
#include "xorlab/labels.hpp"

namespace xorlab {

/// Supported parameter box; outside it double precision gets unreliable.
inline constexpr double kMaxDensity = 20.0;
inline constexpr std::size_t kMinK = 3;
inline constexpr std::size_t kMaxK = 16;

namespace detail {

inline void check_dk(double d, std::size_t k) {
  if (!(d > 0.0 && d <= kMaxDensity)) throw std::domain_error("density d outside (0, 20]: " + std::to_string(d));
  if (k < kMinK || k > kMaxK) throw std::domain_error("k outside [3, 16]: " + std::to_string(k));
}

inline void check_alpha(double a) {
  if (!(a >= 0.0 && a <= 1.0)) throw std::domain_error("alpha outside [0, 1]: " + std::to_string(a));
}

inline double poisson_pmf(double mean, std::uint32_t j) {
  if (mean <= 0.0) return j == 0 ? 1.0 : 0.0;
  return std::exp(j * std::log(mean) - mean - std::lgamma(j + 1.0));
}

}  // namespace detail

inline double phi(double d, std::size_t k, double a) {
  detail::check_dk(d, k);
  detail::check_alpha(a);
  return -std::expm1(-d * std::pow(a, double(k - 1)));
}

inline double Phi(double d, std::size_t k, double a) {
  detail::check_dk(d, k);
  detail::check_alpha(a);
  const double kk = double(k);
  const double lam = d * std::pow(a, kk - 1);
  return std::exp(-lam) + lam - d * (kk - 1) * std::pow(a, kk) / kk - d / kk;
}

inline double Phi_prime(double d, std::size_t k, double a) {
  const double kk = double(k);
  return d * (kk - 1) * std::pow(a, kk - 2) * (phi(d, k, a) - a);
}

inline double Phi_second(double d, std::size_t k, double a) {
  const double kk = double(k);
  const double f = phi(d, k, a);
  const double fp = d * (kk - 1) * std::pow(a, kk - 2) * std::exp(-d * std::pow(a, kk - 1));
  return d * (kk - 1) * (kk - 2) * std::pow(a, kk - 3) * (f - a) + d * (kk - 1) * std::pow(a, kk - 2) * (fp - 1);
}

struct FixedPoints {
  double alpha_u = 0.0;
  double alpha_s = 0.0;
  double alpha_f = 0.0;
  bool degenerate = false;  // double root: alpha_s == alpha_f > 0
};

namespace detail {

inline double golden_max(const std::function<double(double)>& g, double lo, double hi, double tol) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
  double g1 = g(x1), g2 = g(x2);
  while (hi - lo > tol) {
    if (g1 < g2) {
      lo = x1;
      x1 = x2;
      g1 = g2;
      x2 = lo + r * (hi - lo);
      g2 = g(x2);
    } else {
      hi = x2;
      x2 = x1;
      g2 = g1;
      x1 = hi - r * (hi - lo);
      g1 = g(x1);
    }
  }
  return 0.5 * (lo + hi);
}

// Root of g in [lo, hi] given sign(g(lo)) != sign(g(hi)).
inline double bisect_root(const std::function<double(double)>& g, double lo, double hi, double tol) {
  const bool lo_neg = g(lo) < 0.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if ((g(mid) < 0.0) == lo_neg) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline constexpr int kGridPoints = 10000;

}  // namespace detail

/// All solutions of phi(a) = a in [0, 1]. phi(a) - a decreases from 0 near the
/// origin, then has a single interior local maximum; positive roots exist iff
/// that maximum is >= 0. Below the critical density all three values are 0.
inline FixedPoints fixed_points(double d, std::size_t k, double tol = 1e-12) {
  detail::check_dk(d, k);
  const double kk = double(k);
  auto g = [&](double a) { return -std::expm1(-d * std::pow(a, kk - 1)) - a; };
  int best = 1;
  double best_val = g(1.0 / detail::kGridPoints);
  for (int i = 2; i <= detail::kGridPoints; ++i) {
    const double v = g(double(i) / detail::kGridPoints);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  FixedPoints fp;
  // A maximum at the first grid point means g only decreases away from 0:
  // positive roots lie above 1/d >= 0.05, far from the first cell.
  if (best == 1) return fp;
  const double h = 1.0 / detail::kGridPoints;
  const double peak = detail::golden_max(g, std::max(0.0, (best - 1) * h), std::min(1.0, (best + 1) * h), 1e-14);
  const double gmax = g(peak);
  if (gmax < -tol) return fp;
  if (gmax <= tol) {
    fp.alpha_s = fp.alpha_f = peak;
    fp.degenerate = true;
    return fp;
  }
  // local minimum of g between 0 and the peak (g < 0 there)
  const double valley = detail::golden_max([&](double a) { return -g(a); }, 0.0, peak, 1e-14);
  fp.alpha_s = detail::bisect_root(g, valley, peak, tol);
  fp.alpha_f = detail::bisect_root(g, peak, 1.0, tol);
  return fp;
}

/// d_k*: smallest density with a positive fixed point.
inline double threshold_dk_star(std::size_t k, double tol = 1e-9) {
  double lo = 1e-6, hi = kMaxDensity;
  auto has_positive = [&](double d) { return fixed_points(d, k).alpha_f > 0.0; };
  if (!has_positive(hi)) throw std::domain_error("no positive fixed point inside the supported box");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (has_positive(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// d_k = sup{d : max_a Phi(a) = Phi(0)}. The maximum over (0, 1] is attained
/// at a stationary point, i.e. at alpha_f.
inline double threshold_dk(std::size_t k, double tol = 1e-9) {
  auto origin_is_max = [&](double d) {
    const FixedPoints fp = fixed_points(d, k);
    return fp.alpha_f == 0.0 || Phi(d, k, fp.alpha_f) <= Phi(d, k, 0.0);
  };
  double lo = threshold_dk_star(k, tol), hi = std::min(double(k), kMaxDensity);
  if (!origin_is_max(lo) || origin_is_max(hi)) throw std::domain_error("threshold bracket failed");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (origin_is_max(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct ThresholdReport {
  double d = 0.0;
  std::size_t k = 3;
  FixedPoints fp;
  double dk = 0.0;
  double dk_star = 0.0;
  double Phi_u = 0.0, Phi_s = 0.0, Phi_f = 0.0;
  std::string regime;  // "subcritical" (< d_k*), "intermediate", "supercritical" (> d_k); "+degenerate" on a double root
};

inline ThresholdReport threshold_report(double d, std::size_t k) {
  ThresholdReport r;
  r.d = d;
  r.k = k;
  r.fp = fixed_points(d, k);
  r.dk = threshold_dk(k);
  r.dk_star = threshold_dk_star(k);
  r.Phi_u = Phi(d, k, r.fp.alpha_u);
  r.Phi_s = Phi(d, k, r.fp.alpha_s);
  r.Phi_f = Phi(d, k, r.fp.alpha_f);
  r.regime = d < r.dk_star ? "subcritical" : (d <= r.dk ? "intermediate" : "supercritical");
  if (r.fp.degenerate) r.regime += "+degenerate";
  return r;
}

struct NodeStats {
  // indexed by Label: u, s, f
  std::array<double, 3> delta{};
  std::array<double, 3> gamma{};
};

inline NodeStats predicted_node_stats(double d, std::size_t k, double a) {
  detail::check_dk(d, k);
  detail::check_alpha(a);
  const double kk = double(k);
  const double lam = d * std::pow(a, kk - 1);
  const double e = std::exp(-lam);
  NodeStats s;
  s.delta = {e, lam * e, 1.0 - e * (1.0 + lam)};
  const double gs = kk * (1.0 - a) * std::pow(a, kk - 1);
  const double gf = std::pow(a, kk);
  s.gamma = {1.0 - gs - gf, gs, gf};
  return s;
}

/// P[X = j | X >= 2] for X ~ Po(lambda). Both numerator and P[X >= 2] are
/// divided by lambda^2 so that lambda -> 0 gives the point mass at 2.
inline double po_ge2_pmf(double lambda, std::uint32_t j) {
  if (j < 2) return 0.0;
  if (!(lambda >= 0.0)) throw std::domain_error("negative Poisson mean");
  if (lambda == 0.0) return j == 2 ? 1.0 : 0.0;
  double log_tail;  // log of sum_{i>=2} lambda^(i-2) / i!
  if (lambda > 1.0) {
    log_tail = std::log(std::expm1(lambda) - lambda) - 2.0 * std::log(lambda);
  } else {
    double sum = 0.0, term = 0.5;
    for (int i = 2; term > 1e-18 * sum || i < 4; ++i) {
      sum += term;
      term *= lambda / (i + 1);
    }
    log_tail = std::log(sum);
  }
  return std::exp((j - 2.0) * std::log(lambda) - std::lgamma(j + 1.0) - log_tail);
}

/// P[X = j | X >= 2] for X ~ Bin(n, p), scaled the same way as po_ge2_pmf.
inline double bin_ge2_pmf(std::uint32_t n, double p, std::uint32_t j) {
  if (j < 2 || j > n) return 0.0;
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binomial p outside [0, 1]");
  auto scaled = [&](std::uint32_t i) {
    const double logc = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0);
    const double pp = (i == 2) ? 1.0 : std::pow(p, double(i) - 2.0);
    const double qq = (n == i) ? 1.0 : std::pow(1.0 - p, double(n - i));
    return std::exp(logc) * pp * qq;
  };
  double total = 0.0;
  for (std::uint32_t i = 2; i <= n; ++i) total += scaled(i);
  return total > 0.0 ? scaled(j) / total : 0.0;
}

struct DetailPrediction {
  double Delta = 0.0;  // variables: fraction of n
  double Gamma = 0.0;  // checks: fraction of m
};

inline DetailPrediction predicted_detail(double d, std::size_t k, double a, Label z, const StatKey& l) {
  const NodeStats ns = predicted_node_stats(d, k, a);
  const double kk = double(k);
  const double ak1 = std::pow(a, kk - 1);
  const double rest = d * (1.0 - ak1);
  DetailPrediction out;
  const auto zi = static_cast<std::size_t>(z);
  if (in_variable_class(z, l)) {
    switch (z) {
      case Label::u:
        out.Delta = ns.delta[zi] * detail::poisson_pmf(rest, l.uu);
        break;
      case Label::s:
        out.Delta = ns.delta[zi] * detail::poisson_pmf(rest, l.uf);
        break;
      case Label::f:
        out.Delta = ns.delta[zi] * po_ge2_pmf(d * ak1, l.ff) * detail::poisson_pmf(rest, l.uf);
        break;
    }
  }
  if (in_check_class(z, l, static_cast<std::uint32_t>(k))) {
    out.Gamma = ns.gamma[zi];
    if (z == Label::u) out.Gamma *= bin_ge2_pmf(static_cast<std::uint32_t>(k), 1.0 - a, l.uu);
  }
  return out;
}

struct PredictedEntry {
  Label z;
  StatKey key;
  double value;
};

struct PredictedTables {
  std::vector<PredictedEntry> variables;  // Delta-bar, nonzero entries above the cutoff
  std::vector<PredictedEntry> checks;     // Gamma-bar
};

/// Enumerates the (z, l) support of the predictions, dropping entries below `cutoff`.
inline PredictedTables predicted_tables(double d, std::size_t k, double a, double cutoff = 1e-12) {
  PredictedTables t;
  const auto kk = static_cast<std::uint32_t>(k);
  const double lam = d * std::pow(a, double(k) - 1);
  const double rest = d - lam;
  auto push_var = [&](Label z, StatKey key) {
    const double v = predicted_detail(d, k, a, z, key).Delta;
    if (v >= cutoff) t.variables.push_back({z, key, v});
  };
  // Poisson counts beyond this carry less than 1e-16 of the mass for means <= 20.
  const std::uint32_t jmax = 80;
  for (std::uint32_t j = 0; j <= jmax; ++j) {
    push_var(Label::u, {j, 0, 0, 0});
    push_var(Label::s, {0, j, 1, 0});
    if (detail::poisson_pmf(rest, j) < cutoff * 1e-3 && double(j) > rest) continue;
    for (std::uint32_t ff = 2; ff <= jmax; ++ff) push_var(Label::f, {0, j, 0, ff});
  }
  auto push_check = [&](Label z, StatKey key) {
    const double v = predicted_detail(d, k, a, z, key).Gamma;
    if (v >= cutoff) t.checks.push_back({z, key, v});
  };
  for (std::uint32_t uu = 2; uu <= kk; ++uu) push_check(Label::u, {uu, 0, kk - uu, 0});
  push_check(Label::s, {0, 1, kk - 1, 0});
  push_check(Label::f, {0, 0, 0, kk});
  return t;
}

/// f_chi(r) = sum over solutions sigma of sum_j chi_j sigma_j = 0 (on supp chi)
/// of prod_j r[sigma_j]. The last support coordinate is solved for, so the
/// enumeration has q^(|supp|-1) points.
inline double check_poly(const Field& f, std::span<const Elem> chi, std::span<const double> r,
                         double budget = 1e8) {
  if (r.size() != f.q()) throw std::invalid_argument("check_poly: distribution has wrong length");
  std::vector<Elem> c;
  for (auto x : chi) {
    if (!x.is_zero()) c.push_back(x);
  }
  if (c.empty()) throw std::invalid_argument("check_poly: chi has empty support");
  const std::size_t k = c.size();
  if (std::pow(double(f.q()), double(k - 1)) > budget) throw BudgetExceeded("check_poly: q^(k-1) exceeds budget");
  const Elem neg_inv_last = f.neg(f.inv(c.back()));
  std::vector<std::uint32_t> s(k - 1, 0);
  double total = 0.0;
  for (;;) {
    Elem acc = f.zero();
    double prod = 1.0;
    for (std::size_t j = 0; j + 1 < k; ++j) {
      acc = f.add(acc, f.mul(c[j], Elem{s[j]}));
      prod *= r[s[j]];
    }
    total += prod * r[f.mul(acc, neg_inv_last).v];
    std::size_t j = 0;
    while (j < s.size() && ++s[j] == f.q()) s[j++] = 0;
    if (j == s.size()) break;
  }
  return total;
}

}  // namespace xorlab
