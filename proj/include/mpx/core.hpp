#pragma once

// Multiplex data model: the adjacency tensor, the coupling weight, the
// supra-adjacency matrix, sparsity patterns and the projection onto the
// cone of nonnegative matrices with a given pattern.
//
// All indices are 0-based. Vertex i of layer l maps to row l*N + i of the
// supra-adjacency matrix.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "mpx/error.hpp"

namespace mpx {

using Index = Eigen::Index;
using DenseMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, Index>;

enum class Directedness { directed, undirected };

/// One intra-layer edge a_ij^(l) > 0.
struct Entry {
  Index layer = 0;
  Index src = 0;
  Index dst = 0;
  double weight = 1.0;

  friend bool operator==(const Entry&, const Entry&) = default;
};

inline bool canonical_less(const Entry& a, const Entry& b) {
  return std::tie(a.layer, a.src, a.dst) < std::tie(b.layer, b.src, b.dst);
}

/// Third-order adjacency tensor of a multiplex: L layers over the same N
/// vertices. Immutable once constructed; the constructor enforces the
/// invariants (positive weights, no self-loops, one entry per (l, i, j),
/// symmetric storage when undirected).
class MultiplexTensor {
 public:
  MultiplexTensor(Index n_vertices, Index n_layers, std::vector<Entry> entries,
                  Directedness directedness,
                  std::vector<std::string> vertex_labels = {},
                  std::vector<std::string> layer_labels = {})
      : n_vertices_(n_vertices),
        n_layers_(n_layers),
        entries_(std::move(entries)),
        directedness_(directedness),
        vertex_labels_(std::move(vertex_labels)),
        layer_labels_(std::move(layer_labels)) {
    if (n_vertices_ < 1) throw DataError("multiplex needs at least one vertex");
    if (n_layers_ < 1) throw DataError("multiplex needs at least one layer");
    if (vertex_labels_.empty()) vertex_labels_ = default_labels(n_vertices_);
    if (layer_labels_.empty()) layer_labels_ = default_labels(n_layers_);
    if (static_cast<Index>(vertex_labels_.size()) != n_vertices_ ||
        static_cast<Index>(layer_labels_.size()) != n_layers_)
      throw DataError("label count does not match tensor dimensions");

    for (const Entry& e : entries_) {
      if (e.layer < 0 || e.layer >= n_layers_ || e.src < 0 || e.src >= n_vertices_ ||
          e.dst < 0 || e.dst >= n_vertices_)
        throw DataError("entry index out of range");
      if (!(e.weight > 0.0)) throw DataError("edge weight must be positive");
      if (e.src == e.dst) throw DataError("self-loop on vertex " + vertex_labels_[e.src]);
    }
    std::sort(entries_.begin(), entries_.end(), canonical_less);
    for (std::size_t k = 1; k < entries_.size(); ++k) {
      const Entry& a = entries_[k - 1];
      const Entry& b = entries_[k];
      if (a.layer == b.layer && a.src == b.src && a.dst == b.dst)
        throw DataError("duplicate entry (" + layer_labels_[a.layer] + ", " +
                        vertex_labels_[a.src] + ", " + vertex_labels_[a.dst] + ")");
    }
    if (directedness_ == Directedness::undirected) {
      for (const Entry& e : entries_) {
        auto w = weight(e.layer, e.dst, e.src);
        if (!w || *w != e.weight)
          throw DataError("undirected tensor is missing the reverse of (" +
                          layer_labels_[e.layer] + ", " + vertex_labels_[e.src] + ", " +
                          vertex_labels_[e.dst] + ") or its weight differs");
      }
    }
  }

  Index n_vertices() const noexcept { return n_vertices_; }
  Index n_layers() const noexcept { return n_layers_; }
  Directedness directedness() const noexcept { return directedness_; }
  bool undirected() const noexcept { return directedness_ == Directedness::undirected; }

  /// Entries in canonical (layer, src, dst) order.
  const std::vector<Entry>& entries() const noexcept { return entries_; }

  const std::string& vertex_label(Index i) const { return vertex_labels_.at(i); }
  const std::string& layer_label(Index l) const { return layer_labels_.at(l); }
  const std::vector<std::string>& vertex_labels() const noexcept { return vertex_labels_; }
  const std::vector<std::string>& layer_labels() const noexcept { return layer_labels_; }

  std::optional<double> weight(Index layer, Index src, Index dst) const {
    Entry key{layer, src, dst, 0.0};
    auto it = std::lower_bound(entries_.begin(), entries_.end(), key, canonical_less);
    if (it == entries_.end() || it->layer != layer || it->src != src || it->dst != dst)
      return std::nullopt;
    return it->weight;
  }

  /// Adjacency matrix A^(l) of one layer.
  SparseMatrix layer_matrix(Index layer) const {
    std::vector<Eigen::Triplet<double, Index>> trips;
    for (const Entry& e : entries_)
      if (e.layer == layer) trips.emplace_back(e.src, e.dst, e.weight);
    SparseMatrix m(n_vertices_, n_vertices_);
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
  }

  /// Returns the same multiplex with new weights for the entries, in
  /// canonical order. Used by perturbation workflows.
  MultiplexTensor with_weights(const std::vector<double>& weights) const {
    if (weights.size() != entries_.size())
      throw DimensionError("weight vector does not match entry count");
    std::vector<Entry> e = entries_;
    for (std::size_t k = 0; k < e.size(); ++k) e[k].weight = weights[k];
    return MultiplexTensor(n_vertices_, n_layers_, std::move(e), directedness_,
                           vertex_labels_, layer_labels_);
  }

 private:
  static std::vector<std::string> default_labels(Index n) {
    std::vector<std::string> out;
    out.reserve(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) out.push_back(std::to_string(i + 1));
    return out;
  }

  Index n_vertices_;
  Index n_layers_;
  std::vector<Entry> entries_;
  Directedness directedness_;
  std::vector<std::string> vertex_labels_;
  std::vector<std::string> layer_labels_;
};

/// Inter-layer coupling weight gamma > 0. Each layer switch costs 1/gamma.
class CouplingParameter {
 public:
  explicit CouplingParameter(double gamma) : gamma_(gamma) {
    if (!(gamma > 0.0)) throw DataError("coupling gamma must be positive");
  }
  double value() const noexcept { return gamma_; }
  double switch_cost() const noexcept { return 1.0 / gamma_; }

  friend bool operator==(const CouplingParameter&, const CouplingParameter&) = default;

 private:
  double gamma_;
};

/// B(gamma) = blkdiag[A^(1), ..., A^(L)] + gamma (1 1^T (x) I_N - I_NL).
struct SupraAdjacency {
  SparseMatrix matrix;
  Index n_vertices = 0;
  Index n_layers = 0;
  double gamma = 0.0;

  Index size() const noexcept { return n_vertices * n_layers; }
  Index index(Index layer, Index vertex) const noexcept { return layer * n_vertices + vertex; }

  DenseMatrix block(Index row_layer, Index col_layer) const {
    return DenseMatrix(matrix).block(row_layer * n_vertices, col_layer * n_vertices,
                                     n_vertices, n_vertices);
  }
};

/// Set of (row, column) positions of an n x n matrix.
class SparsityPattern {
 public:
  using Position = std::pair<Index, Index>;

  SparsityPattern(Index dimension, std::vector<Position> positions)
      : dimension_(dimension), positions_(std::move(positions)) {
    for (const auto& [r, c] : positions_)
      if (r < 0 || c < 0 || r >= dimension_ || c >= dimension_)
        throw DimensionError("pattern position out of bounds");
    std::sort(positions_.begin(), positions_.end());
    positions_.erase(std::unique(positions_.begin(), positions_.end()), positions_.end());
  }

  static SparsityPattern full(Index dimension) {
    std::vector<Position> p;
    p.reserve(static_cast<std::size_t>(dimension * dimension));
    for (Index r = 0; r < dimension; ++r)
      for (Index c = 0; c < dimension; ++c) p.emplace_back(r, c);
    return SparsityPattern(dimension, std::move(p));
  }

  Index dimension() const noexcept { return dimension_; }
  const std::vector<Position>& positions() const noexcept { return positions_; }
  std::size_t size() const noexcept { return positions_.size(); }
  bool contains(Index r, Index c) const {
    return std::binary_search(positions_.begin(), positions_.end(), Position{r, c});
  }

 private:
  Index dimension_;
  std::vector<Position> positions_;
};

/// A+ = sum over layers of A^(l).
inline DenseMatrix aggregate(const MultiplexTensor& t) {
  DenseMatrix a = DenseMatrix::Zero(t.n_vertices(), t.n_vertices());
  for (const Entry& e : t.entries()) a(e.src, e.dst) += e.weight;
  return a;
}

/// B_d = blkdiag[A^(1), ..., A^(L)] as an NL x NL matrix.
inline SparseMatrix block_diagonal(const MultiplexTensor& t) {
  const Index n = t.n_vertices();
  std::vector<Eigen::Triplet<double, Index>> trips;
  trips.reserve(t.entries().size());
  for (const Entry& e : t.entries())
    trips.emplace_back(e.layer * n + e.src, e.layer * n + e.dst, e.weight);
  SparseMatrix m(n * t.n_layers(), n * t.n_layers());
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

inline SupraAdjacency build_supra(const MultiplexTensor& t, const CouplingParameter& g) {
  const Index n = t.n_vertices();
  const Index layers = t.n_layers();
  std::vector<Eigen::Triplet<double, Index>> trips;
  trips.reserve(t.entries().size() + static_cast<std::size_t>(n * layers * (layers - 1)));
  for (const Entry& e : t.entries())
    trips.emplace_back(e.layer * n + e.src, e.layer * n + e.dst, e.weight);
  for (Index l1 = 0; l1 < layers; ++l1)
    for (Index l2 = 0; l2 < layers; ++l2)
      if (l1 != l2)
        for (Index i = 0; i < n; ++i) trips.emplace_back(l1 * n + i, l2 * n + i, g.value());
  SupraAdjacency b;
  b.matrix = SparseMatrix(n * layers, n * layers);
  b.matrix.setFromTriplets(trips.begin(), trips.end());
  b.n_vertices = n;
  b.n_layers = layers;
  b.gamma = g.value();
  return b;
}

inline SparsityPattern pattern_of(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("pattern_of needs a square matrix");
  std::vector<SparsityPattern::Position> p;
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c)
      if (m(r, c) > 0.0) p.emplace_back(r, c);
  return SparsityPattern(m.rows(), std::move(p));
}

inline SparsityPattern pattern_of(const SparseMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("pattern_of needs a square matrix");
  std::vector<SparsityPattern::Position> p;
  for (Index r = 0; r < m.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(m, r); it; ++it)
      if (it.value() > 0.0) p.emplace_back(it.row(), it.col());
  return SparsityPattern(m.rows(), std::move(p));
}

/// Frobenius-nearest matrix in the cone of nonnegative matrices supported
/// on `s`: entries outside the pattern are zeroed.
inline DenseMatrix project_onto_cone(const DenseMatrix& m, const SparsityPattern& s) {
  if (m.rows() != s.dimension() || m.cols() != s.dimension())
    throw DimensionError("matrix and pattern dimensions differ");
  DenseMatrix out = DenseMatrix::Zero(m.rows(), m.cols());
  for (const auto& [r, c] : s.positions()) out(r, c) = m(r, c);
  return out;
}

namespace detail {

inline std::vector<std::vector<Index>> adjacency_lists(const SparseMatrix& m, bool transpose) {
  std::vector<std::vector<Index>> adj(static_cast<std::size_t>(m.rows()));
  for (Index r = 0; r < m.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(m, r); it; ++it)
      if (it.value() > 0.0) {
        if (transpose)
          adj[it.col()].push_back(it.row());
        else
          adj[it.row()].push_back(it.col());
      }
  return adj;
}

inline bool reaches_all(const std::vector<std::vector<Index>>& adj) {
  std::vector<char> seen(adj.size(), 0);
  std::vector<Index> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    Index v = stack.back();
    stack.pop_back();
    for (Index w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
  }
  return count == adj.size();
}

}  // namespace detail

/// True iff the digraph of positive entries is strongly connected.
inline bool is_irreducible(const SparseMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("is_irreducible needs a square matrix");
  if (m.rows() == 0) return false;
  if (m.rows() == 1) return true;
  return detail::reaches_all(detail::adjacency_lists(m, false)) &&
         detail::reaches_all(detail::adjacency_lists(m, true));
}

inline bool is_irreducible(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("is_irreducible needs a square matrix");
  return is_irreducible(SparseMatrix(m.sparseView()));
}

/// Strongly connected components of the digraph of positive entries
/// (iterative Tarjan). Each component lists its vertices in ascending order;
/// components come out in reverse topological order.
inline std::vector<std::vector<Index>> strong_components(const SparseMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("strong_components needs a square matrix");
  const auto adj = detail::adjacency_lists(m, false);
  const std::size_t n = adj.size();
  constexpr Index unvisited = -1;
  std::vector<Index> order(n, unvisited), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<Index> stack;
  std::vector<std::pair<Index, std::size_t>> call;  // vertex, next edge
  std::vector<std::vector<Index>> out;
  Index counter = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (order[root] != unvisited) continue;
    call.emplace_back(static_cast<Index>(root), 0);
    order[root] = low[root] = counter++;
    stack.push_back(static_cast<Index>(root));
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, next] = call.back();
      if (next < adj[v].size()) {
        const Index w = adj[v][next++];
        if (order[w] == unvisited) {
          order[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], order[w]);
        }
        continue;
      }
      const Index done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == order[done]) {
        std::vector<Index> comp;
        Index w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != done);
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
      }
    }
  }
  return out;
}

}  // namespace mpx
