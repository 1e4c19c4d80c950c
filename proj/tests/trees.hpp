#pragma once

// Random instances whose Tanner graph is a forest: weight-k checks join
// variables from distinct components, then unary pins are appended.

#include <numeric>
#include <vector>

#include "xorlab/ensemble.hpp"
#include "xorlab/rng.hpp"
#include "xorlab/sparse_matrix.hpp"

namespace trees {

inline xorlab::SparseMatrix random_pinned_forest(std::size_t n, std::size_t k, std::uint64_t q, xorlab::Rng& rng) {
  const xorlab::Field f = xorlab::build_field(q);
  xorlab::SparseMatrix a(f, n);
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  const std::size_t attempts = n / 2;
  for (std::size_t t = 0; t < attempts; ++t) {
    const std::size_t w = 2 + rng.below(k - 1);  // weights 2..k
    auto cols = xorlab::sample_subset(n, w, rng);
    std::vector<std::size_t> roots;
    bool ok = true;
    for (auto c : cols) {
      const auto r = find(c);
      for (auto s : roots) ok = ok && s != r;
      roots.push_back(r);
    }
    if (!ok) continue;
    for (std::size_t i = 1; i < roots.size(); ++i) parent[roots[i]] = roots[0];
    xorlab::SparseRow row;
    for (auto c : cols) row.push_back({c, xorlab::Elem{static_cast<std::uint32_t>(1 + rng.below(f.q() - 1))}});
    a.add_row(std::move(row));
  }
  return xorlab::pin(a, xorlab::draw_pin_count(n, rng), rng);
}

}  // namespace trees
