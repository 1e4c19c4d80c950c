#pragma once

// Warning Propagation on the Tanner graph of a sparse matrix.
//
// Messages live on directed edges and take values u / f:
//   v -> a is f  iff some other check b of v sends f to v;
//   a -> v is f  iff every other variable of a sends f to a.
// A degree-1 variable therefore always sends u, a degree-1 check always sends f.

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "xorlab/error.hpp"
#include "xorlab/labels.hpp"
#include "xorlab/linalg.hpp"
#include "xorlab/sparse_matrix.hpp"
#include "xorlab/theory.hpp"

namespace xorlab {

/// Bipartite graph with an edge a_i - v_j per nonzero A_ij. Edge ids follow the
/// row-major order of the nonzeros.
class TannerGraph {
 public:
  TannerGraph() = default;
  explicit TannerGraph(const SparseMatrix& a) : n_vars_(a.n_cols()), n_checks_(a.n_rows()) {
    check_start_.assign(n_checks_ + 1, 0);
    for (std::size_t i = 0; i < n_checks_; ++i) check_start_[i + 1] = check_start_[i] + a.row(i).size();
    const std::size_t e = check_start_.back();
    edge_var_.resize(e);
    edge_check_.resize(e);
    var_start_.assign(n_vars_ + 1, 0);
    for (std::size_t i = 0, id = 0; i < n_checks_; ++i) {
      for (const auto& entry : a.row(i)) {
        edge_var_[id] = entry.col;
        edge_check_[id] = static_cast<std::uint32_t>(i);
        ++var_start_[entry.col + 1];
        ++id;
      }
    }
    for (std::size_t j = 0; j < n_vars_; ++j) var_start_[j + 1] += var_start_[j];
    var_edges_.resize(e);
    std::vector<std::size_t> fill(var_start_.begin(), var_start_.end() - 1);
    for (std::uint32_t id = 0; id < e; ++id) var_edges_[fill[edge_var_[id]]++] = id;
  }

  std::size_t n_vars() const { return n_vars_; }
  std::size_t n_checks() const { return n_checks_; }
  std::size_t n_edges() const { return edge_var_.size(); }

  std::uint32_t edge_var(std::size_t e) const { return edge_var_[e]; }
  std::uint32_t edge_check(std::size_t e) const { return edge_check_[e]; }

  /// Edge ids of check i (contiguous, sorted by variable).
  std::pair<std::size_t, std::size_t> check_edges(std::size_t i) const { return {check_start_[i], check_start_[i + 1]}; }
  /// Edge ids of variable j, sorted by check.
  std::span<const std::uint32_t> var_edges(std::size_t j) const {
    return {var_edges_.data() + var_start_[j], var_start_[j + 1] - var_start_[j]};
  }
  std::size_t var_degree(std::size_t j) const { return var_start_[j + 1] - var_start_[j]; }
  std::size_t check_degree(std::size_t i) const { return check_start_[i + 1] - check_start_[i]; }

 private:
  std::size_t n_vars_ = 0, n_checks_ = 0;
  std::vector<std::size_t> check_start_, var_start_;
  std::vector<std::uint32_t> edge_var_, edge_check_, var_edges_;
};

struct MessageSet {
  std::vector<Msg> var_to_check;  // indexed by edge id
  std::vector<Msg> check_to_var;

  static MessageSet uniform(const TannerGraph& g, Msg m) {
    return {std::vector<Msg>(g.n_edges(), m), std::vector<Msg>(g.n_edges(), m)};
  }
  std::size_t count_f() const {
    std::size_t c = 0;
    for (auto m : var_to_check) c += m == Msg::f;
    for (auto m : check_to_var) c += m == Msg::f;
    return c;
  }
  friend bool operator==(const MessageSet&, const MessageSet&) = default;
};

/// Work estimate for standard_messages: one elimination per check and per edge.
inline double standard_messages_cost(const SparseMatrix& a) {
  return double(a.n_rows() + a.nnz()) * double(a.n_rows()) * double(a.n_cols());
}

namespace detail {

inline bool column_frozen(const SparseMatrix& a, std::uint32_t col) {
  const Rref r = rref(a);
  for (std::size_t row = 0; row < r.rank; ++row) {
    if (r.pivot_cols[row] == col) return r.reduced.row(row).size() == 1;
    if (r.pivot_cols[row] > col) break;
  }
  return false;
}

}  // namespace detail

/// Exact messages from frozen sets of minors:
///   v_j -> a_i is f iff j is frozen in A without row i,
///   a_i -> v_j is f iff j is frozen in A without the rows of the other checks of v_j.
inline MessageSet standard_messages(const SparseMatrix& a, double budget = 1e10) {
  if (standard_messages_cost(a) > budget) {
    throw BudgetExceeded("standard_messages: estimated cost " + std::to_string(standard_messages_cost(a)) +
                         " exceeds budget " + std::to_string(budget));
  }
  const TannerGraph g(a);
  MessageSet msgs = MessageSet::uniform(g, Msg::u);
  for (std::size_t i = 0; i < a.n_rows(); ++i) {
    const std::uint32_t drop[] = {static_cast<std::uint32_t>(i)};
    const auto frozen = frozen_set(minor(a, drop, {}).matrix);
    const auto [lo, hi] = g.check_edges(i);
    for (std::size_t e = lo; e < hi; ++e) {
      if (std::binary_search(frozen.begin(), frozen.end(), g.edge_var(e))) msgs.var_to_check[e] = Msg::f;
    }
  }
  for (std::size_t e = 0; e < g.n_edges(); ++e) {
    const std::uint32_t j = g.edge_var(e);
    std::vector<std::uint32_t> drop;
    for (auto other : g.var_edges(j)) {
      if (other != e) drop.push_back(g.edge_check(other));
    }
    if (detail::column_frozen(minor(a, drop, {}).matrix, j)) msgs.check_to_var[e] = Msg::f;
  }
  return msgs;
}

/// One synchronous application of the update rules; O(#edges).
inline MessageSet wp_update(const TannerGraph& g, const MessageSet& in) {
  if (in.var_to_check.size() != g.n_edges() || in.check_to_var.size() != g.n_edges()) {
    throw std::invalid_argument("message set does not match graph");
  }
  MessageSet out = MessageSet::uniform(g, Msg::u);
  for (std::size_t j = 0; j < g.n_vars(); ++j) {
    std::size_t f_in = 0;
    for (auto e : g.var_edges(j)) f_in += in.check_to_var[e] == Msg::f;
    for (auto e : g.var_edges(j)) {
      const std::size_t others = f_in - (in.check_to_var[e] == Msg::f);
      out.var_to_check[e] = others >= 1 ? Msg::f : Msg::u;
    }
  }
  for (std::size_t i = 0; i < g.n_checks(); ++i) {
    const auto [lo, hi] = g.check_edges(i);
    std::size_t f_in = 0;
    for (std::size_t e = lo; e < hi; ++e) f_in += in.var_to_check[e] == Msg::f;
    for (std::size_t e = lo; e < hi; ++e) {
      const std::size_t others = f_in - (in.var_to_check[e] == Msg::f);
      out.check_to_var[e] = others == (hi - lo) - 1 ? Msg::f : Msg::u;
    }
  }
  return out;
}

enum class WpInit { all_f, all_u };

struct WpResult {
  MessageSet msgs;
  bool converged = false;
  std::size_t iterations = 0;  // number of updates applied, including the final unchanged one
};

namespace detail {

inline bool f_subset(const std::vector<Msg>& a, const std::vector<Msg>& b) {
  for (std::size_t e = 0; e < a.size(); ++e) {
    if (a[e] == Msg::f && b[e] != Msg::f) return false;
  }
  return true;
}

}  // namespace detail

/// Repeats wp_update until nothing changes or max_iter updates were applied.
inline WpResult wp_iterate(const TannerGraph& g, MessageSet init, std::size_t max_iter, bool monotone = false) {
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  WpResult r{std::move(init), false, 0};
  while (r.iterations < max_iter) {
    MessageSet next = wp_update(g, r.msgs);
    ++r.iterations;
    if (monotone) {
      assert(detail::f_subset(next.var_to_check, r.msgs.var_to_check));
      assert(detail::f_subset(next.check_to_var, r.msgs.check_to_var));
    }
    if (next == r.msgs) {
      r.converged = true;
      break;
    }
    r.msgs = std::move(next);
  }
  return r;
}

inline WpResult wp_iterate(const TannerGraph& g, WpInit init, std::size_t max_iter) {
  const Msg m = init == WpInit::all_f ? Msg::f : Msg::u;
  return wp_iterate(g, MessageSet::uniform(g, m), max_iter, init == WpInit::all_f);
}

struct Labels {
  std::vector<Label> var;
  std::vector<Label> check;
};

inline Labels labels(const TannerGraph& g, const MessageSet& msgs) {
  Labels out{std::vector<Label>(g.n_vars(), Label::u), std::vector<Label>(g.n_checks(), Label::u)};
  for (std::size_t j = 0; j < g.n_vars(); ++j) {
    std::size_t f_in = 0;
    for (auto e : g.var_edges(j)) f_in += msgs.check_to_var[e] == Msg::f;
    out.var[j] = f_in >= 2 ? Label::f : (f_in == 1 ? Label::s : Label::u);
  }
  for (std::size_t i = 0; i < g.n_checks(); ++i) {
    const auto [lo, hi] = g.check_edges(i);
    std::size_t f_in = 0;
    for (std::size_t e = lo; e < hi; ++e) f_in += msgs.var_to_check[e] == Msg::f;
    const std::size_t deg = hi - lo;
    out.check[i] = f_in == deg ? Label::f : (f_in + 1 == deg ? Label::s : Label::u);
  }
  return out;
}

using StatTable = std::map<std::pair<Label, StatKey>, std::size_t>;

struct WpStats {
  StatTable variables;  // Delta: (z, l) -> #variables
  StatTable checks;     // Gamma: (z, l) -> #checks
  std::size_t off_class_variables = 0;  // l outside the admissible class of z
  std::size_t off_class_checks = 0;     // (checks judged against weight k; 0 if k not given)
};

namespace detail {

inline void tally(StatKey& key, Msg incoming, Msg outgoing) {
  if (incoming == Msg::u) {
    ++(outgoing == Msg::u ? key.uu : key.uf);
  } else {
    ++(outgoing == Msg::u ? key.fu : key.ff);
  }
}

}  // namespace detail

/// l_st counts incident edges with incoming message s and outgoing message t.
inline WpStats stats(const TannerGraph& g, const MessageSet& msgs, std::size_t k = 0) {
  const Labels lab = labels(g, msgs);
  WpStats s;
  for (std::size_t j = 0; j < g.n_vars(); ++j) {
    StatKey key;
    for (auto e : g.var_edges(j)) detail::tally(key, msgs.check_to_var[e], msgs.var_to_check[e]);
    ++s.variables[{lab.var[j], key}];
    if (!in_variable_class(lab.var[j], key)) ++s.off_class_variables;
  }
  for (std::size_t i = 0; i < g.n_checks(); ++i) {
    StatKey key;
    const auto [lo, hi] = g.check_edges(i);
    for (std::size_t e = lo; e < hi; ++e) detail::tally(key, msgs.var_to_check[e], msgs.check_to_var[e]);
    ++s.checks[{lab.check[i], key}];
    if (k > 0 && !in_check_class(lab.check[i], key, static_cast<std::uint32_t>(k))) ++s.off_class_checks;
  }
  return s;
}

inline std::size_t fixed_point_violations(const TannerGraph& g, const MessageSet& msgs) {
  const MessageSet next = wp_update(g, msgs);
  std::size_t changed = 0;
  for (std::size_t e = 0; e < g.n_edges(); ++e) {
    changed += next.var_to_check[e] != msgs.var_to_check[e];
    changed += next.check_to_var[e] != msgs.check_to_var[e];
  }
  return changed;
}

struct StatsDistance {
  double total = 0.0;                // sum |Delta - n Delta-bar| + |Gamma - m Gamma-bar|, divided by n
  std::array<double, 3> variables{};  // per label z, divided by n
  std::array<double, 3> checks{};
};

/// Distance between measured statistics and predictions at alpha, for a graph
/// with n variables and m checks. Predictions below `cutoff` are treated as 0.
inline StatsDistance stats_distance(const WpStats& s, double d, std::size_t k, double alpha, std::size_t n,
                                    std::size_t m, double cutoff = 1e-12) {
  if (n == 0) throw std::invalid_argument("stats_distance: n = 0");
  const PredictedTables pred = predicted_tables(d, k, alpha, cutoff);
  StatsDistance out;
  auto accumulate = [&](const StatTable& measured, const std::vector<PredictedEntry>& predicted, double scale,
                        std::array<double, 3>& per_z) {
    std::map<std::pair<Label, StatKey>, double> expected;
    for (const auto& p : predicted) expected[{p.z, p.key}] = scale * p.value;
    for (const auto& [key, count] : measured) {
      const auto it = expected.find(key);
      const double want = it == expected.end() ? 0.0 : it->second;
      per_z[static_cast<std::size_t>(key.first)] += std::fabs(double(count) - want);
    }
    for (const auto& [key, want] : expected) {
      if (!measured.contains(key)) per_z[static_cast<std::size_t>(key.first)] += want;
    }
  };
  accumulate(s.variables, pred.variables, double(n), out.variables);
  accumulate(s.checks, pred.checks, double(m), out.checks);
  for (std::size_t z = 0; z < 3; ++z) {
    out.variables[z] /= double(n);
    out.checks[z] /= double(n);
    out.total += out.variables[z] + out.checks[z];
  }
  return out;
}

/// Approximate fixed point with the predicted statistics at alpha.
inline bool is_alpha_fixed_point(const TannerGraph& g, const MessageSet& msgs, double d, std::size_t k, double alpha,
                                 double tol_fp = 0.1, double tol_stats = 0.1) {
  if (!(tol_fp > 0.0 && tol_stats > 0.0)) throw std::invalid_argument("tolerances must be positive");
  const double n = double(g.n_vars());
  if (double(fixed_point_violations(g, msgs)) > tol_fp * n) return false;
  const StatsDistance dist = stats_distance(stats(g, msgs, k), d, k, alpha, g.n_vars(), g.n_checks());
  return dist.total <= tol_stats;
}

/// Sum over values s and degrees l of |sum_{j unfrozen, deg l} (1{sigma_j = s} - 1/q)|.
/// `skip_zero` restricts s to the nonzero values.
inline double degree_resolved_imbalance(const TannerGraph& g, std::span<const Label> var_labels,
                                        std::span<const Elem> sigma, std::uint32_t q, bool skip_zero) {
  if (sigma.size() != g.n_vars() || var_labels.size() != g.n_vars()) {
    throw std::invalid_argument("degree_resolved_imbalance: length mismatch");
  }
  std::map<std::size_t, std::vector<std::size_t>> by_degree;  // degree -> value counts
  std::map<std::size_t, std::size_t> totals;
  for (std::size_t j = 0; j < g.n_vars(); ++j) {
    if (var_labels[j] != Label::u) continue;
    auto& counts = by_degree[g.var_degree(j)];
    counts.resize(q, 0);
    ++counts.at(sigma[j].v);
    ++totals[g.var_degree(j)];
  }
  double sum = 0.0;
  for (const auto& [deg, counts] : by_degree) {
    const double expect = double(totals[deg]) / double(q);
    for (std::uint32_t s = skip_zero ? 1 : 0; s < q; ++s) sum += std::fabs(double(counts[s]) - expect);
  }
  return sum;
}

/// sigma is an extension of the labelling: it vanishes on labelled variables
/// (up to tol n exceptions plus imbalance), and is balanced on unlabelled ones
/// per degree. The imbalance term runs over nonzero values only.
inline bool is_extension(const TannerGraph& g, const Labels& lab, std::span<const Elem> sigma, std::uint32_t q,
                         double tol) {
  if (sigma.size() != g.n_vars()) throw std::invalid_argument("is_extension: sigma has wrong length");
  double bad = 0.0;
  for (std::size_t j = 0; j < g.n_vars(); ++j) bad += (lab.var[j] != Label::u && !sigma[j].is_zero()) ? 1.0 : 0.0;
  bad += degree_resolved_imbalance(g, lab.var, sigma, q, true);
  return bad <= tol * double(g.n_vars());
}

/// CSV dump: edge, check, variable, direction, value.
inline void write_messages_csv(std::ostream& os, const TannerGraph& g, const MessageSet& msgs) {
  os << "edge,check,variable,direction,value\n";
  for (std::size_t e = 0; e < g.n_edges(); ++e) {
    os << e << ',' << g.edge_check(e) << ',' << g.edge_var(e) << ",v2c," << to_char(msgs.var_to_check[e]) << '\n';
    os << e << ',' << g.edge_check(e) << ',' << g.edge_var(e) << ",c2v," << to_char(msgs.check_to_var[e]) << '\n';
  }
}

inline void write_labels_csv(std::ostream& os, const Labels& lab) {
  os << "node,index,label\n";
  for (std::size_t j = 0; j < lab.var.size(); ++j) os << "var," << j << ',' << to_char(lab.var[j]) << '\n';
  for (std::size_t i = 0; i < lab.check.size(); ++i) os << "check," << i << ',' << to_char(lab.check[i]) << '\n';
}

/// "z/uu-uf-fu-ff" keys as used in JSON output.
inline std::string stat_key_name(Label z, const StatKey& key) { return std::string(1, to_char(z)) + "/" + key.str(); }

}  // namespace xorlab
