#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mpx/core.hpp"
#include "mpx/io.hpp"

namespace mpx::test {

inline MultiplexTensor from_text(const std::string& text,
                                 Directedness d = Directedness::directed,
                                 InputFormat f = InputFormat::extended_edge_list) {
  std::istringstream in(text);
  return parse_multiplex(in, f, d);
}

struct RandomSpec {
  Index max_vertices = 6;
  Index max_layers = 3;
  double min_weight = 0.5;
  double max_weight = 2.0;
  double density = 0.35;
  bool undirected = false;
  bool strongly_connected = false;  ///< thread a random cycle through all vertices
};

/// Random multiplex with N in [2, max_vertices], L in [1, max_layers].
inline MultiplexTensor random_multiplex(std::mt19937_64& rng, const RandomSpec& spec) {
  std::uniform_int_distribution<Index> nd(2, spec.max_vertices);
  std::uniform_int_distribution<Index> ld(1, spec.max_layers);
  std::uniform_real_distribution<double> wd(spec.min_weight, spec.max_weight);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const Index n = nd(rng);
  const Index layers = ld(rng);
  std::uniform_int_distribution<Index> pick_layer(0, layers - 1);

  std::vector<double> a(static_cast<std::size_t>(layers * n * n), 0.0);
  auto at = [&](Index l, Index i, Index j) -> double& {
    return a[static_cast<std::size_t>((l * n + i) * n + j)];
  };
  for (Index l = 0; l < layers; ++l)
    for (Index i = 0; i < n; ++i)
      for (Index j = spec.undirected ? i + 1 : 0; j < n; ++j)
        if (i != j && coin(rng) < spec.density) {
          at(l, i, j) = wd(rng);
          if (spec.undirected) at(l, j, i) = at(l, i, j);
        }
  if (spec.strongly_connected) {
    std::vector<Index> order(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::shuffle(order.begin(), order.end(), rng);
    for (Index k = 0; k < n; ++k) {
      const Index i = order[static_cast<std::size_t>(k)];
      const Index j = order[static_cast<std::size_t>((k + 1) % n)];
      const Index l = pick_layer(rng);
      if (at(l, i, j) == 0.0) at(l, i, j) = wd(rng);
      if (spec.undirected) at(l, j, i) = at(l, i, j);
    }
  }
  std::vector<Entry> entries;
  for (Index l = 0; l < layers; ++l)
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (at(l, i, j) > 0.0) entries.push_back({l, i, j, at(l, i, j)});
  return MultiplexTensor(n, layers, std::move(entries),
                         spec.undirected ? Directedness::undirected : Directedness::directed);
}

/// Random nonnegative irreducible n x n matrix: a random cycle plus sparse
/// positive entries, zero diagonal.
inline DenseMatrix random_irreducible(std::mt19937_64& rng, Index n, double density = 0.4,
                                      bool symmetric = false) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  DenseMatrix m = DenseMatrix::Zero(n, n);
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::shuffle(order.begin(), order.end(), rng);
  for (Index k = 0; k < n; ++k)
    m(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>((k + 1) % n)]) = u(rng);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j && coin(rng) < density) m(i, j) = u(rng);
  if (symmetric) m = (m + m.transpose()).eval();
  return m;
}

/// Minimum cost over every layer-assigned walk from `src` to `dst` with at
/// most `k` intra-layer edges, by exhaustive depth-first enumeration.
inline double enumerate_walk_cost(const MultiplexTensor& t, double gamma, Index src, Index dst,
                                  int k) {
  if (src == dst) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  std::function<void(Index, Index, double, int)> walk = [&](Index v, Index last, double cost,
                                                            int used) {
    if (v == dst && used > 0) best = std::min(best, cost);
    if (used == k) return;
    for (const Entry& e : t.entries()) {
      if (e.src != v) continue;
      const double sw = (last >= 0 && last != e.layer) ? 1.0 / gamma : 0.0;
      walk(e.dst, e.layer, cost + 1.0 / e.weight + sw, used + 1);
    }
  };
  walk(src, -1, 0.0, 0);
  return best;
}

/// Plain min-plus powers of the single-layer length matrix (no switches).
inline DenseMatrix minplus_power_lengths(const MultiplexTensor& t, int k) {
  const Index n = t.n_vertices();
  constexpr double inf = std::numeric_limits<double>::infinity();
  DenseMatrix p1 = DenseMatrix::Constant(n, n, inf);
  for (Index i = 0; i < n; ++i) p1(i, i) = 0.0;
  for (const Entry& e : t.entries()) p1(e.src, e.dst) = std::min(p1(e.src, e.dst), 1.0 / e.weight);
  DenseMatrix p = p1;
  for (int r = 1; r < k; ++r) {
    DenseMatrix q = DenseMatrix::Constant(n, n, inf);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        for (Index h = 0; h < n; ++h) q(i, j) = std::min(q(i, j), p(i, h) + p1(h, j));
    p = q;
  }
  return p;
}

inline double rel_diff(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

}  // namespace mpx::test
