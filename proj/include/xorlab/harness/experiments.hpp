#pragma once

// Monte Carlo experiments. Every experiment maps a config to per-trial records
// and a summary computed from those records alone.
//
// Trial t of every grid point uses the seed derive_seed(master, t), so grid
// points share their randomness (common random numbers).

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "xorlab/ensemble.hpp"
#include "xorlab/error.hpp"
#include "xorlab/harness/config.hpp"
#include "xorlab/harness/pool.hpp"
#include "xorlab/harness/record.hpp"
#include "xorlab/linalg.hpp"
#include "xorlab/peel.hpp"
#include "xorlab/rng.hpp"
#include "xorlab/theory.hpp"
#include "xorlab/wp.hpp"

namespace xorlab::harness {

struct ExperimentResult {
  std::string experiment;
  std::vector<TrialRecord> trials;
  SummaryTable summary;
  json results = json::object();  // scalar outcomes (estimates, reference values)
};

namespace detail {

inline std::vector<double> density_grid(const ExperimentConfig& c) {
  if (!c.densities.empty()) return c.densities;
  return {c.params.density()};
}

inline EnsembleParams params_at(const ExperimentConfig& c, double d, std::size_t n = 0) {
  EnsembleParams p = c.params;
  p.m.reset();
  p.d = d;
  if (n) p.n = n;
  return p;
}

inline void fill_common(TrialRecord& r, const EnsembleParams& p, const SparseMatrix& a, std::size_t t) {
  r.n = p.n;
  r.k = p.k;
  r.q = p.q;
  r.d = p.density();
  r.m = a.n_rows();
  r.t = t;
}

/// Runs `groups x trials` tasks; task (g, t) gets trial index g*T + t and seed derive_seed(master, t).
template <class Fn>
std::vector<TrialRecord> run_grid(const ExperimentConfig& c, std::size_t groups, Fn fn) {
  const std::size_t trials = c.trials;
  return parallel_map(groups * trials, c.workers, [&](std::size_t idx) {
    const std::size_t g = idx / trials, t = idx % trials;
    const auto start = std::chrono::steady_clock::now();
    TrialRecord r;
    r.trial = idx;
    r.seed = derive_seed(c.seed(), t);
    fn(g, r);
    r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return r;
  });
}

template <class Get>
double mean_of(const std::vector<const TrialRecord*>& rs, Get get) {
  double s = 0.0;
  std::size_t cnt = 0;
  for (const auto* r : rs) {
    const double v = get(*r);
    if (!std::isnan(v)) {
      s += v;
      ++cnt;
    }
  }
  return cnt ? s / double(cnt) : kUnset;
}

/// Records grouped by trial index / trials (i.e. by grid point), in order.
inline std::vector<std::vector<const TrialRecord*>> by_group(const std::vector<TrialRecord>& recs,
                                                             std::size_t trials) {
  std::vector<std::vector<const TrialRecord*>> out;
  for (const auto& r : recs) {
    const std::size_t g = r.trial / trials;
    if (out.size() <= g) out.resize(g + 1);
    out[g].push_back(&r);
  }
  return out;
}

inline double resolve_alpha(const ExperimentConfig& c, double d, std::size_t k, double empirical) {
  if (c.alpha == "empirical") return empirical;
  if (c.alpha == "fixed-point") return fixed_points(d, k).alpha_f;
  return std::stod(c.alpha);
}

inline std::string num(double v) { return format_number(v); }

}  // namespace detail

// ---------------------------------------------------------------------------

inline SummaryTable summarize_rank_profile(const ExperimentConfig& c, const std::vector<TrialRecord>& recs) {
  SummaryTable s{{"d", "n", "trials", "full_rank_frac", "mean_nullity"}, {}};
  for (const auto& g : detail::by_group(recs, c.trials)) {
    s.rows.push_back({detail::num(g.front()->d), std::to_string(g.front()->n), std::to_string(g.size()),
                      detail::num(detail::mean_of(g, [](const TrialRecord& r) { return double(r.full_row_rank); })),
                      detail::num(detail::mean_of(g, [](const TrialRecord& r) { return double(r.nullity); }))});
  }
  return s;
}

/// Fraction of trials in which the base matrix has full row rank, per density.
inline ExperimentResult exp_rank_profile(const ExperimentConfig& c) {
  const auto grid = detail::density_grid(c);
  for (double d : grid) {
    if (d < 0.0 || d > kMaxDensity) throw ConfigError("density outside [0, 20]");
  }
  ExperimentResult out{"rank-profile", {}, {}, json::object()};
  out.trials = detail::run_grid(c, grid.size(), [&](std::size_t g, TrialRecord& r) {
    const EnsembleParams p = detail::params_at(c, grid[g]);
    Rng rng(r.seed);
    const SparseMatrix a = gen_base(p, rng);
    detail::fill_common(r, p, a, 0);
    r.d = grid[g];
    r.rank = static_cast<std::int64_t>(rank(a));
    r.nullity = static_cast<std::int64_t>(p.n) - r.rank;
    r.full_row_rank = r.rank == static_cast<std::int64_t>(a.n_rows());
  });
  out.summary = summarize_rank_profile(c, out.trials);
  return out;
}

// ---------------------------------------------------------------------------

struct ScanOutcome {
  double estimate = 0.0;   // m/n where the full-rank probability crosses 1/2
  double half_width = 0.0;
  SummaryTable steps;
};

/// Bisection on the ratio m/n using the per-trial longest full-rank prefix L_t:
/// the prefix of round(c n) rows has full rank in trial t iff round(c n) <= L_t.
inline ScanOutcome summarize_threshold_scan(const ExperimentConfig& c, const std::vector<TrialRecord>& recs) {
  const double n = double(c.params.n);
  auto frac = [&](double ratio) {
    const double m = std::llround(ratio * n);
    std::size_t ok = 0;
    for (const auto& r : recs) ok += m <= r.get("full_rank_prefix");
    return double(ok) / double(recs.size());
  };
  ScanOutcome o;
  o.steps = {{"ratio", "m", "trials", "full_rank_frac"}, {}};
  auto record = [&](double ratio, double f) {
    o.steps.rows.push_back({detail::num(ratio), std::to_string(std::llround(ratio * n)), std::to_string(recs.size()),
                            detail::num(f)});
  };
  double lo = c.scan.lo, hi = c.scan.hi;
  const double flo = frac(lo), fhi = frac(hi);
  record(lo, flo);
  record(hi, fhi);
  if (!(flo > 0.5 && fhi < 0.5)) {
    std::ostringstream msg;
    msg << "threshold scan: bracket not achieved (full_rank_frac " << flo << " at " << lo << ", " << fhi << " at "
        << hi << ")";
    throw ExperimentError(msg.str());
  }
  while (hi - lo > c.scan.resolution) {
    const double mid = 0.5 * (lo + hi);
    const double f = frac(mid);
    record(mid, f);
    if (f > 0.5) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  o.estimate = 0.5 * (lo + hi);
  o.half_width = 0.5 * (hi - lo);
  return o;
}

inline ExperimentResult exp_threshold_scan(const ExperimentConfig& c) {
  ExperimentResult out{"threshold-scan", {}, {}, json::object()};
  const auto m_hi = static_cast<std::size_t>(std::llround(c.scan.hi * double(c.params.n)));
  out.trials = detail::run_grid(c, 1, [&](std::size_t, TrialRecord& r) {
    EnsembleParams p = c.params;
    p.d.reset();
    p.m = m_hi;
    Rng rng(r.seed);
    const SparseMatrix a = gen_base(p, rng);
    detail::fill_common(r, p, a, 0);
    const std::size_t prefix = full_rank_prefix(a);
    r.set("full_rank_prefix", double(prefix));
    r.set("prefix_ratio", double(prefix) / double(p.n));
  });
  const ScanOutcome o = summarize_threshold_scan(c, out.trials);
  out.summary = o.steps;
  out.results["estimate"] = o.estimate;
  out.results["half_width"] = o.half_width;
  if (c.params.k >= kMinK && c.params.k <= kMaxK) {
    const double ref = threshold_dk(c.params.k) / double(c.params.k);
    out.results["dk_over_k"] = ref;
    out.results["finite_size_shift"] = o.estimate - ref;
  }
  return out;
}

// ---------------------------------------------------------------------------

inline SummaryTable summarize_wp_stats(const ExperimentConfig& c, const std::vector<TrialRecord>& recs) {
  SummaryTable s{{"d", "n", "trials", "mode", "mean_alpha_hat", "mean_alpha_used", "mean_stats_distance",
                  "mean_dist_u", "mean_dist_s", "mean_dist_f", "mean_fp_violations", "mean_symdiff",
                  "converged_frac", "mean_iterations"},
                 {}};
  for (const auto& g : detail::by_group(recs, c.trials)) {
    auto col = [&](const char* key) { return detail::num(detail::mean_of(g, [&](const TrialRecord& r) { return r.get(key); })); };
    s.rows.push_back({detail::num(g.front()->d), std::to_string(g.front()->n), std::to_string(g.size()), c.wp_mode,
                      detail::num(detail::mean_of(g, [](const TrialRecord& r) { return r.alpha_hat; })),
                      col("alpha_used"),
                      detail::num(detail::mean_of(g, [](const TrialRecord& r) { return r.stats_distance; })),
                      col("dist_u"), col("dist_s"), col("dist_f"),
                      detail::num(detail::mean_of(g, [](const TrialRecord& r) { return double(r.fp_violations); })),
                      col("label_frozen_symdiff"), col("converged"),
                      detail::num(detail::mean_of(g, [](const TrialRecord& r) {
                        return r.wp_iterations < 0 ? kUnset : double(r.wp_iterations);
                      }))});
  }
  return s;
}

/// WP messages on pinned instances and their statistics against the predictions.
inline ExperimentResult exp_wp_stats(const ExperimentConfig& c) {
  const auto grid = detail::density_grid(c);
  const bool exact = c.wp_mode == "exact";
  ExperimentResult out{"wp-stats", {}, {}, json::object()};
  out.trials = detail::run_grid(c, grid.size(), [&](std::size_t g, TrialRecord& r) {
    const EnsembleParams p = detail::params_at(c, grid[g]);
    Rng rng(r.seed);
    const PinnedInstance inst = gen_pinned(p, rng);
    const SparseMatrix& a = inst.matrix;
    detail::fill_common(r, p, a, inst.t);
    r.d = grid[g];
    const TannerGraph graph(a);
    MessageSet msgs;
    if (exact) {
      msgs = standard_messages(a, c.wp_budget);
      const Rref red = rref(a);
      const auto frozen = frozen_set(red);
      r.rank = static_cast<std::int64_t>(red.rank);
      r.nullity = static_cast<std::int64_t>(p.n) - r.rank;
      r.full_row_rank = red.rank == a.n_rows();
      r.alpha_hat = double(frozen.size()) / double(p.n);
      const Labels lab = labels(graph, msgs);
      std::vector<char> in_f(p.n, 0);
      for (auto j : frozen) in_f[j] = 1;
      std::size_t symdiff = 0;
      for (std::size_t j = 0; j < p.n; ++j) symdiff += (lab.var[j] != Label::u) != bool(in_f[j]);
      r.set("label_frozen_symdiff", double(symdiff));
      r.set("label_frozen_symdiff_frac", double(symdiff) / double(p.n));
    } else {
      const std::size_t max_iter = c.max_iter ? c.max_iter : graph.n_edges() + 1;
      WpResult res = wp_iterate(graph, WpInit::all_f, max_iter);
      msgs = std::move(res.msgs);
      r.wp_iterations = static_cast<std::int64_t>(res.iterations);
      r.set("converged", res.converged ? 1.0 : 0.0);
      std::size_t f = 0;
      for (auto m : msgs.var_to_check) f += m == Msg::f;
      r.alpha_hat = graph.n_edges() ? double(f) / double(graph.n_edges()) : 0.0;
    }
    r.fp_violations = static_cast<std::int64_t>(fixed_point_violations(graph, msgs));
    const double alpha = detail::resolve_alpha(c, grid[g], p.k, r.alpha_hat);
    r.set("alpha_used", alpha);
    const WpStats st = stats(graph, msgs, p.k);
    const StatsDistance dist = stats_distance(st, grid[g], p.k, alpha, p.n, a.n_rows());
    r.stats_distance = dist.total;
    r.set("dist_u", dist.variables[0] + dist.checks[0]);
    r.set("dist_s", dist.variables[1] + dist.checks[1]);
    r.set("dist_f", dist.variables[2] + dist.checks[2]);
    r.set("off_class_variables", double(st.off_class_variables));
    r.set("off_class_checks", double(st.off_class_checks));
    std::size_t vf = 0;
    for (auto m : msgs.var_to_check) vf += m == Msg::f;
    r.set("f_fraction", graph.n_edges() ? double(vf) / double(graph.n_edges()) : 0.0);
    r.set("is_alpha_fixed_point",
          double(fixed_point_violations(graph, msgs)) <= c.tol.tol_fp * double(p.n) && dist.total <= c.tol.tol_stats);
  });
  out.summary = summarize_wp_stats(c, out.trials);
  return out;
}

// ---------------------------------------------------------------------------

inline SummaryTable summarize_balance(const ExperimentConfig& c, const std::vector<TrialRecord>& recs) {
  SummaryTable s{{"d", "q", "n", "trials", "mean_balance_l2", "mean_balance_l1", "mean_degree_imbalance",
                  "mean_alpha_hat", "pass_frac"},
                 {}};
  for (const auto& g : detail::by_group(recs, c.trials)) {
    s.rows.push_back({detail::num(g.front()->d), std::to_string(g.front()->q), std::to_string(g.front()->n),
                      std::to_string(g.size()),
                      detail::num(detail::mean_of(g, [](const TrialRecord& r) { return r.balance_distance; })),
                      detail::num(detail::mean_of(g, [](const TrialRecord& r) { return r.get("balance_l1"); })),
                      detail::num(detail::mean_of(g, [](const TrialRecord& r) { return r.get("degree_imbalance"); })),
                      detail::num(detail::mean_of(g, [](const TrialRecord& r) { return r.alpha_hat; })),
                      detail::num(detail::mean_of(g, [&](const TrialRecord& r) {
                        return r.balance_distance <= c.tol.tol_balance ? 1.0 : 0.0;
                      }))});
  }
  return s;
}

/// Balance of uniform kernel samples of pinned instances.
inline ExperimentResult exp_balance(const ExperimentConfig& c) {
  const auto grid = detail::density_grid(c);
  if (c.samples < 1) throw ConfigError("samples must be >= 1");
  ExperimentResult out{"balance", {}, {}, json::object()};
  out.trials = detail::run_grid(c, grid.size(), [&](std::size_t g, TrialRecord& r) {
    const EnsembleParams p = detail::params_at(c, grid[g]);
    Rng rng(r.seed);
    const PinnedInstance inst = gen_pinned(p, rng);
    detail::fill_common(r, p, inst.matrix, inst.t);
    r.d = grid[g];
    const KernelSampler sampler(inst.matrix);
    const auto frozen = frozen_set(sampler.reduced());
    r.rank = static_cast<std::int64_t>(sampler.reduced().rank);
    r.nullity = static_cast<std::int64_t>(sampler.nullity());
    r.full_row_rank = sampler.reduced().rank == inst.matrix.n_rows();
    r.alpha_hat = double(frozen.size()) / double(p.n);
    // unfrozen columns play the role of u-labelled variables
    const TannerGraph graph(inst.matrix);
    std::vector<Label> lab(p.n, Label::u);
    for (auto j : frozen) lab[j] = Label::f;
    const auto q = static_cast<std::uint32_t>(p.q);
    double l2 = 0.0, l1 = 0.0, imb = 0.0;
    Rng srng(derive_seed(r.seed, 1));
    for (std::size_t s = 0; s < c.samples; ++s) {
      const auto sigma = sampler.sample(srng);
      const BalanceProfile bp = balance_profile(sigma, q);
      l2 += bp.distance(Norm::l2);
      l1 += bp.distance(Norm::l1);
      imb += degree_resolved_imbalance(graph, lab, sigma, q, false) / double(p.n);
    }
    r.balance_distance = l2 / double(c.samples);
    r.set("balance_l1", l1 / double(c.samples));
    r.set("degree_imbalance", imb / double(c.samples));
  });
  out.summary = summarize_balance(c, out.trials);
  return out;
}

// ---------------------------------------------------------------------------

/// Instances up to this size get an exact rank to cross-check the core certificate.
inline constexpr std::size_t kExactRankCheckLimit = 500;

inline SummaryTable summarize_peel(const ExperimentConfig& c, const std::vector<TrialRecord>& recs) {
  SummaryTable s{{"d", "n", "trials", "empty_core_frac", "positive_excess_frac", "mean_excess_over_n",
                  "mean_core_cols_over_n", "implication_violations"},
                 {}};
  for (const auto& g : detail::by_group(recs, c.trials)) {
    std::size_t violations = 0;
    for (const auto* r : g) violations += r->get("implication_ok") == 0.0;
    s.rows.push_back(
        {detail::num(g.front()->d), std::to_string(g.front()->n), std::to_string(g.size()),
         detail::num(detail::mean_of(g, [](const TrialRecord& r) { return r.core_cols == 0 ? 1.0 : 0.0; })),
         detail::num(detail::mean_of(g, [](const TrialRecord& r) { return r.excess > 0 ? 1.0 : 0.0; })),
         detail::num(detail::mean_of(g, [](const TrialRecord& r) { return double(r.excess) / double(r.n); })),
         detail::num(detail::mean_of(g, [](const TrialRecord& r) { return double(r.core_cols) / double(r.n); })),
         std::to_string(violations)});
  }
  return s;
}

/// 2-core statistics of the base ensemble.
inline ExperimentResult exp_peel(const ExperimentConfig& c) {
  const auto grid = detail::density_grid(c);
  ExperimentResult out{"peel", {}, {}, json::object()};
  out.trials = detail::run_grid(c, grid.size(), [&](std::size_t g, TrialRecord& r) {
    const EnsembleParams p = detail::params_at(c, grid[g]);
    Rng rng(r.seed);
    const SparseMatrix a = gen_base(p, rng);
    detail::fill_common(r, p, a, 0);
    r.d = grid[g];
    const PeelResult core = two_core(a);
    r.core_rows = static_cast<std::int64_t>(core.core_rows());
    r.core_cols = static_cast<std::int64_t>(core.core_cols());
    r.excess = core.excess();
    if (p.n <= kExactRankCheckLimit) {
      r.rank = static_cast<std::int64_t>(rref(a).rank);  // independent of the peeling
      r.nullity = static_cast<std::int64_t>(p.n) - r.rank;
      r.full_row_rank = r.rank == static_cast<std::int64_t>(a.n_rows());
      r.set("implication_ok", (r.excess <= 0 || !r.full_row_rank) ? 1.0 : 0.0);
    }
  });
  out.summary = summarize_peel(c, out.trials);
  if (c.params.k >= kMinK && c.params.k <= kMaxK) {
    out.results["dk_star"] = threshold_dk_star(c.params.k);
    out.results["dk"] = threshold_dk(c.params.k);
  }
  return out;
}

// ---------------------------------------------------------------------------

inline SummaryTable summarize_interpolation(const ExperimentConfig& c, const std::vector<TrialRecord>& recs) {
  SummaryTable s{{"d", "theta", "n", "trials", "mean_nullity_frac", "predicted_theta1", "mean_pinned_nullity_frac",
                  "Phi_f", "lower_bound_frac"},
                 {}};
  for (const auto& g : detail::by_group(recs, c.trials)) {
    const auto* f = g.front();
    s.rows.push_back({detail::num(f->d), detail::num(f->get("theta")), std::to_string(f->n), std::to_string(g.size()),
                      detail::num(detail::mean_of(g, [](const TrialRecord& r) { return double(r.nullity) / double(r.n); })),
                      detail::num(f->get("predicted_theta1")),
                      detail::num(detail::mean_of(g, [](const TrialRecord& r) { return r.get("pinned_nullity_frac"); })),
                      detail::num(f->get("Phi_f")),
                      detail::num(detail::mean_of(g, [](const TrialRecord& r) { return r.get("lower_bound_ok"); }))});
  }
  return s;
}

/// Nullity along the interpolation family at the configured thetas.
inline ExperimentResult exp_interpolation(const ExperimentConfig& c) {
  const auto grid = detail::density_grid(c);
  const std::size_t nt = c.thetas.size();
  if (nt == 0) throw ConfigError("thetas must be non-empty");
  ExperimentResult out{"interpolate", {}, {}, json::object()};
  out.trials = detail::run_grid(c, grid.size() * nt, [&](std::size_t g, TrialRecord& r) {
    const double d = grid[g / nt], theta = c.thetas[g % nt];
    const EnsembleParams p = detail::params_at(c, d);
    const FixedPoints fp = fixed_points(d, p.k);
    Rng rng(r.seed);
    const InterpolatedInstance inst = gen_interpolated(p, theta, fp.alpha_f, rng);
    detail::fill_common(r, p, inst.matrix, inst.t);
    r.d = d;
    r.rank = static_cast<std::int64_t>(rank(inst.matrix));
    r.nullity = static_cast<std::int64_t>(p.n) - r.rank;
    r.full_row_rank = r.rank == static_cast<std::int64_t>(inst.matrix.n_rows());
    const double kk = double(p.k);
    const double phi_f = Phi(d, p.k, fp.alpha_f);
    r.set("theta", theta);
    r.set("alpha_f", fp.alpha_f);
    r.set("m_theta", double(inst.m_theta));
    r.set("m_unary", double(inst.m_unary));
    r.set("predicted_theta1", std::exp(-d * std::pow(fp.alpha_f, kk - 1)));
    r.set("Phi_f", phi_f);
    r.set("lower_bound_ok", double(r.nullity) / double(p.n) >= phi_f - c.tol.tol_nullity ? 1.0 : 0.0);
    if (theta == 0.0) {
      Rng prng(derive_seed(r.seed, 1));
      const PinnedInstance pinned = gen_pinned(p, prng);
      r.set("pinned_nullity_frac", double(nullity(pinned.matrix)) / double(p.n));
    }
  });
  out.summary = summarize_interpolation(c, out.trials);
  return out;
}

// ---------------------------------------------------------------------------

inline SummaryTable summarize_freeness(const ExperimentConfig& c, const std::vector<TrialRecord>& recs) {
  SummaryTable s{{"n", "d", "trials", "delta", "ell", "pass_frac"}, {}};
  for (const auto& g : detail::by_group(recs, c.trials)) {
    s.rows.push_back({std::to_string(g.front()->n), detail::num(g.front()->d), std::to_string(g.size()),
                      detail::num(c.delta), std::to_string(c.ell),
                      detail::num(detail::mean_of(g, [](const TrialRecord& r) { return r.get("is_free"); }))});
  }
  return s;
}

/// Exhaustive (delta, ell)-freeness audit of pinned instances for each n.
inline ExperimentResult exp_freeness_audit(const ExperimentConfig& c) {
  std::vector<std::size_t> ns = c.ns.empty() ? std::vector<std::size_t>{c.params.n} : c.ns;
  const double d = c.densities.empty() ? c.params.density() : c.densities.front();
  ExperimentResult out{"audit-freeness", {}, {}, json::object()};
  out.trials = detail::run_grid(c, ns.size(), [&](std::size_t g, TrialRecord& r) {
    const EnsembleParams p = detail::params_at(c, d, ns[g]);
    Rng rng(r.seed);
    const PinnedInstance inst = gen_pinned(p, rng);
    detail::fill_common(r, p, inst.matrix, inst.t);
    r.d = d;
    const FreenessReport rep = freeness_audit(inst.matrix, c.delta, c.ell, c.budget);
    r.set("is_free", rep.is_free ? 1.0 : 0.0);
    for (std::size_t h = 2; h <= c.ell; ++h) {
      r.set("relations_h" + std::to_string(h), double(rep.counts[h]));
      r.set("limit_h" + std::to_string(h), rep.limits[h]);
    }
  });
  out.summary = summarize_freeness(c, out.trials);
  return out;
}

// ---------------------------------------------------------------------------

inline const std::map<std::string, std::function<ExperimentResult(const ExperimentConfig&)>>& experiments() {
  static const std::map<std::string, std::function<ExperimentResult(const ExperimentConfig&)>> table = {
      {"rank-profile", exp_rank_profile}, {"threshold-scan", exp_threshold_scan}, {"wp-stats", exp_wp_stats},
      {"balance", exp_balance},           {"peel", exp_peel},                     {"interpolate", exp_interpolation},
      {"audit-freeness", exp_freeness_audit}};
  return table;
}

inline ExperimentResult run_experiment(const ExperimentConfig& c) {
  const auto& table = experiments();
  const auto it = table.find(c.experiment);
  if (it == table.end()) throw ConfigError("unknown experiment '" + c.experiment + "'");
  return it->second(c);
}

}  // namespace xorlab::harness
