#include <gtest/gtest.h>

#include <sstream>

#include "oracle.hpp"
#include "trees.hpp"
#include "xorlab/ensemble.hpp"
#include "xorlab/linalg.hpp"
#include "xorlab/theory.hpp"
#include "xorlab/wp.hpp"

using xorlab::Label;
using xorlab::Msg;
using xorlab::SparseMatrix;
using xorlab::StatKey;
using xorlab::TannerGraph;

namespace {

SparseMatrix dense(std::vector<std::vector<std::uint32_t>> rows, std::size_t n, std::uint64_t q = 2) {
  return SparseMatrix::from_dense(xorlab::build_field(q), rows, n);
}

// One check on v0, v1, v2 plus pins on v1 and v2.
SparseMatrix pinned_triangle() { return dense({{1, 1, 1}, {0, 1, 0}, {0, 0, 1}}, 3); }

SparseMatrix random_instance(std::size_t n, double d, std::uint64_t seed, bool pinned = true) {
  xorlab::EnsembleParams p;
  p.n = n;
  p.k = 3;
  p.d = d;
  xorlab::Rng rng(seed);
  return pinned ? xorlab::gen_pinned(p, rng).matrix : xorlab::gen_base(p, rng);
}

// Update rules written edge by edge, straight from the definitions.
xorlab::MessageSet naive_update(const TannerGraph& g, const xorlab::MessageSet& in) {
  auto out = xorlab::MessageSet::uniform(g, Msg::u);
  for (std::size_t e = 0; e < g.n_edges(); ++e) {
    const auto v = g.edge_var(e), a = g.edge_check(e);
    bool any = false;
    for (auto o : g.var_edges(v)) any = any || (o != e && in.check_to_var[o] == Msg::f);
    out.var_to_check[e] = any ? Msg::f : Msg::u;
    bool all = true;
    const auto [lo, hi] = g.check_edges(a);
    for (std::size_t o = lo; o < hi; ++o) all = all && (o == e || in.var_to_check[o] == Msg::f);
    out.check_to_var[e] = all ? Msg::f : Msg::u;
  }
  return out;
}

}  // namespace

TEST(StandardMessages, PathOfTwo) {
  const auto a = dense({{1, 1}}, 2);
  const auto m = xorlab::standard_messages(a);
  EXPECT_EQ(m, xorlab::MessageSet::uniform(TannerGraph(a), Msg::u));
}

TEST(StandardMessages, PinnedTriangle) {
  const auto a = pinned_triangle();
  const TannerGraph g(a);
  const auto m = xorlab::standard_messages(a);
  // edges 0,1,2 belong to the weight-3 check
  EXPECT_EQ(m.var_to_check[0], Msg::u);
  EXPECT_EQ(m.var_to_check[1], Msg::f);
  EXPECT_EQ(m.var_to_check[2], Msg::f);
  EXPECT_EQ(m.check_to_var[0], Msg::f);
  const auto lab = xorlab::labels(g, m);
  EXPECT_EQ(lab.var[0], Label::s);
  const auto st = xorlab::stats(g, m, 3);
  EXPECT_EQ(st.variables.at({Label::s, StatKey{0, 0, 1, 0}}), 1u);
}

TEST(StandardMessages, EmptyMatrix) {
  const SparseMatrix a(xorlab::build_field(2), 4);
  const auto m = xorlab::standard_messages(a);
  EXPECT_TRUE(m.var_to_check.empty());
  EXPECT_TRUE(m.check_to_var.empty());
}

TEST(StandardMessages, Budget) {
  const auto a = random_instance(400, 2.5, 1);
  EXPECT_THROW(xorlab::standard_messages(a, 1e6), xorlab::BudgetExceeded);
}

TEST(WpUpdate, AllUIsFixed) {
  const auto a = random_instance(300, 2.5, 2, false);
  const TannerGraph g(a);
  const auto u = xorlab::MessageSet::uniform(g, Msg::u);
  EXPECT_EQ(xorlab::wp_update(g, u), u);
}

TEST(WpUpdate, UnaryCheckAlwaysSendsF) {
  const auto a = dense({{1, 0}, {1, 1}}, 2);
  const TannerGraph g(a);
  for (Msg m : {Msg::u, Msg::f}) EXPECT_EQ(xorlab::wp_update(g, xorlab::MessageSet::uniform(g, m)).check_to_var[0], Msg::f);
}

TEST(WpUpdate, LoneCheckFromAllF) {
  const auto a = dense({{1, 1, 1}}, 3);
  const TannerGraph g(a);
  const auto all_f = xorlab::MessageSet::uniform(g, Msg::f);
  const auto out = xorlab::wp_update(g, all_f);
  for (auto m : out.var_to_check) EXPECT_EQ(m, Msg::u);
  EXPECT_EQ(xorlab::fixed_point_violations(g, all_f), 3u);
}

TEST(WpUpdate, MatchesNaiveRules) {
  xorlab::Rng rng(3);
  for (int t = 0; t < 30; ++t) {
    const auto a = random_instance(60 + t, 1.5 + 0.1 * t, 100 + t);
    const TannerGraph g(a);
    auto in = xorlab::MessageSet::uniform(g, Msg::u);
    for (auto& m : in.var_to_check) m = rng.below(2) ? Msg::f : Msg::u;
    for (auto& m : in.check_to_var) m = rng.below(2) ? Msg::f : Msg::u;
    EXPECT_EQ(xorlab::wp_update(g, in), naive_update(g, in));
  }
  EXPECT_THROW(xorlab::wp_update(TannerGraph(pinned_triangle()), xorlab::MessageSet{}), std::invalid_argument);
}

TEST(WpIterate, AllUConvergesImmediately) {
  const auto a = random_instance(500, 2.7, 4, false);
  const TannerGraph g(a);
  const auto r = xorlab::wp_iterate(g, xorlab::WpInit::all_u, 10);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 1u);
  EXPECT_EQ(r.msgs.count_f(), 0u);
}

TEST(WpIterate, PinnedRandomInstanceConverges) {
  const auto a = random_instance(200, 2.5, 5);
  const TannerGraph g(a);
  const auto r = xorlab::wp_iterate(g, xorlab::WpInit::all_f, 400);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(xorlab::fixed_point_violations(g, r.msgs), 0u);
}

TEST(WpIterate, MonotoneFromAllF) {
  const auto a = random_instance(1000, 2.9, 6);
  const TannerGraph g(a);
  auto cur = xorlab::MessageSet::uniform(g, Msg::f);
  std::size_t prev = cur.count_f();
  for (int i = 0; i < 50; ++i) {
    cur = xorlab::wp_update(g, cur);
    EXPECT_LE(cur.count_f(), prev);
    prev = cur.count_f();
  }
}

TEST(WpIterate, ExactOnForests) {
  xorlab::Rng rng(2024);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng.below(39);
    const std::uint64_t q = t % 2 ? 3 : 2;
    const auto a = trees::random_pinned_forest(n, 3, q, rng);
    const TannerGraph g(a);
    const auto exact = xorlab::standard_messages(a);
    ASSERT_EQ(xorlab::fixed_point_violations(g, exact), 0u) << "instance " << t;
    const auto it = xorlab::wp_iterate(g, xorlab::WpInit::all_f, g.n_edges() + 1);
    ASSERT_TRUE(it.converged);
    ASSERT_EQ(it.msgs, exact) << "instance " << t;
  }
}

TEST(Labels, Examples) {
  // isolated variable
  const auto a = dense({{1, 1, 0}}, 3);
  const TannerGraph g(a);
  EXPECT_EQ(xorlab::labels(g, xorlab::MessageSet::uniform(g, Msg::f)).var[2], Label::u);
  // unary check: incoming f -> f, incoming u -> s
  const auto b = dense({{1}}, 1);
  const TannerGraph h(b);
  EXPECT_EQ(xorlab::labels(h, xorlab::MessageSet::uniform(h, Msg::f)).check[0], Label::f);
  EXPECT_EQ(xorlab::labels(h, xorlab::MessageSet::uniform(h, Msg::u)).check[0], Label::s);
}

TEST(Stats, AllUMessages) {
  const auto a = random_instance(400, 2.2, 7, false);
  const TannerGraph g(a);
  const auto st = xorlab::stats(g, xorlab::MessageSet::uniform(g, Msg::u), 3);
  std::size_t nv = 0, nc = 0;
  for (const auto& [key, c] : st.variables) {
    EXPECT_EQ(key.first, Label::u);
    EXPECT_EQ(key.second.uf + key.second.fu + key.second.ff, 0u);
    nv += c;
  }
  for (const auto& [key, c] : st.checks) nc += c;
  EXPECT_EQ(nv, g.n_vars());
  EXPECT_EQ(nc, g.n_checks());
  for (std::size_t j = 0; j < g.n_vars(); ++j) {
    const auto deg = static_cast<std::uint32_t>(g.var_degree(j));
    EXPECT_GE(st.variables.at({Label::u, StatKey{deg, 0, 0, 0}}), 1u);
  }
  EXPECT_EQ(st.off_class_variables, 0u);
}

TEST(Stats, FixedPointsAreInClass) {
  const auto a = random_instance(3000, 2.9, 8);
  const TannerGraph g(a);
  const auto r = xorlab::wp_iterate(g, xorlab::WpInit::all_f, g.n_edges() + 1);
  const auto st = xorlab::stats(g, r.msgs, 3);
  EXPECT_EQ(st.off_class_variables, 0u);
  // pins are weight-1 checks, judged against k = 3
  std::size_t unary = 0;
  for (std::size_t i = 0; i < g.n_checks(); ++i) unary += g.check_degree(i) == 1;
  EXPECT_LE(st.off_class_checks, unary);
}

TEST(AlphaFixedPoint, Examples) {
  const auto a = random_instance(2000, 2.0, 9, false);
  const TannerGraph g(a);
  const auto u = xorlab::MessageSet::uniform(g, Msg::u);
  EXPECT_TRUE(xorlab::is_alpha_fixed_point(g, u, 2.0, 3, 0.0));
  const double af = xorlab::fixed_points(2.9, 3).alpha_f;
  EXPECT_FALSE(xorlab::is_alpha_fixed_point(g, u, 2.0, 3, af));
  EXPECT_THROW(xorlab::is_alpha_fixed_point(g, u, 2.0, 3, 0.0, 0.0), std::invalid_argument);
}

TEST(AlphaFixedPoint, ConvergedIterateAtEmpiricalAlpha) {
  const auto a = random_instance(10000, 2.9, 10);
  const TannerGraph g(a);
  const auto r = xorlab::wp_iterate(g, xorlab::WpInit::all_f, g.n_edges() + 1);
  std::size_t f = 0;
  for (auto m : r.msgs.var_to_check) f += m == Msg::f;
  const double alpha = double(f) / double(g.n_edges());
  EXPECT_TRUE(xorlab::is_alpha_fixed_point(g, r.msgs, 2.9, 3, alpha));
}

TEST(Extension, Examples) {
  const auto a = random_instance(400, 2.0, 11, false);
  const TannerGraph g(a);
  const std::size_t n = g.n_vars();
  xorlab::Labels all_f{std::vector<Label>(n, Label::f), std::vector<Label>(g.n_checks(), Label::u)};
  EXPECT_TRUE(xorlab::is_extension(g, all_f, std::vector<xorlab::Elem>(n), 2, 0.0));

  // exactly balanced within every degree class
  xorlab::Labels all_u{std::vector<Label>(n, Label::u), std::vector<Label>(g.n_checks(), Label::u)};
  std::vector<xorlab::Elem> sigma(n);
  std::map<std::size_t, std::size_t> seen;
  for (std::size_t j = 0; j < n; ++j) sigma[j] = xorlab::Elem{static_cast<std::uint32_t>(seen[g.var_degree(j)]++ % 2)};
  EXPECT_TRUE(xorlab::is_extension(g, all_u, sigma, 2, 0.05));

  xorlab::Labels half = all_u;
  for (std::size_t j = 0; j < n / 2; ++j) half.var[j] = Label::f;
  const std::vector<xorlab::Elem> ones(n, xorlab::Elem{1});
  EXPECT_FALSE(xorlab::is_extension(g, half, ones, 2, 0.49));
}

TEST(Dumps, CsvShapes) {
  const auto a = pinned_triangle();
  const TannerGraph g(a);
  const auto m = xorlab::standard_messages(a);
  std::ostringstream ms, ls;
  xorlab::write_messages_csv(ms, g, m);
  xorlab::write_labels_csv(ls, xorlab::labels(g, m));
  EXPECT_EQ(ms.str().substr(0, 37), "edge,check,variable,direction,value\n0");
  EXPECT_NE(ms.str().find("0,0,0,c2v,f\n"), std::string::npos);
  EXPECT_NE(ls.str().find("var,0,s\n"), std::string::npos);
  EXPECT_EQ(xorlab::stat_key_name(Label::s, StatKey{0, 0, 1, 0}), "s/0-0-1-0");
}
