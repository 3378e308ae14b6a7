#pragma once

// Min-plus kernels and the multiplex K-path length matrix.
//
// P^K holds, for every ordered pair, the length of the shortest path with at
// most K intra-layer edges, where an edge of weight a costs 1/a and every
// layer switch costs 1/gamma. Next to the lengths we keep, per entry, the set
// of layers in which the currently known shortest paths end; the extension
// step uses it to decide whether appending an edge in layer l incurs a
// switch.

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "mpx/core.hpp"
#include "mpx/parallel.hpp"

namespace mpx {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// c_ij = min_h (a_ih + b_hj); +inf absorbs.
template <typename MatA, typename MatB>
RowMatrix minplus_multiply(const MatA& a, const MatB& b) {
  if (a.cols() != b.rows()) throw DimensionError("min-plus product: inner dimensions differ");
  RowMatrix c = RowMatrix::Constant(a.rows(), b.cols(), infinity);
  for (Index i = 0; i < a.rows(); ++i)
    for (Index h = 0; h < a.cols(); ++h) {
      const double aih = a(i, h);
      if (aih == infinity) continue;
      for (Index j = 0; j < b.cols(); ++j) {
        const double s = aih + b(h, j);
        if (s < c(i, j)) c(i, j) = s;
      }
    }
  return c;
}

/// Min-plus identity: 0 on the diagonal, +inf elsewhere.
inline RowMatrix tropical_identity(Index n) {
  RowMatrix m = RowMatrix::Constant(n, n, infinity);
  m.diagonal().setZero();
  return m;
}

/// Per-layer reciprocal lengths p_ij^(l): 0 on the diagonal, 1/a_ij^(l) for
/// edges, +inf otherwise. Stored as outgoing edge lists since the tensor is
/// sparse.
class ReciprocalLengthTensor {
 public:
  struct Arc {
    Index dst;
    Index layer;
    double length;
  };

  explicit ReciprocalLengthTensor(const MultiplexTensor& t)
      : n_(t.n_vertices()), layers_(t.n_layers()), out_(static_cast<std::size_t>(n_)) {
    for (const Entry& e : t.entries()) out_[e.src].push_back({e.dst, e.layer, 1.0 / e.weight});
  }

  Index n_vertices() const noexcept { return n_; }
  Index n_layers() const noexcept { return layers_; }
  const std::vector<Arc>& out_arcs(Index h) const { return out_[h]; }

  double value(Index layer, Index i, Index j) const {
    if (i == j) return 0.0;
    for (const Arc& a : out_[i])
      if (a.dst == j && a.layer == layer) return a.length;
    return infinity;
  }

 private:
  Index n_;
  Index layers_;
  std::vector<std::vector<Arc>> out_;
};

class PathLengthMatrix {
 public:
  PathLengthMatrix(Index n, Index n_layers, int k, double gamma)
      : n_(n),
        n_layers_(n_layers),
        words_(static_cast<std::size_t>((n_layers + 63) / 64)),
        k_(k),
        gamma_(gamma),
        lengths_(RowMatrix::Constant(n, n, infinity)),
        layers_(static_cast<std::size_t>(n * n) * words_, 0) {
    lengths_.diagonal().setZero();
  }

  Index n_vertices() const noexcept { return n_; }
  Index n_layers() const noexcept { return n_layers_; }
  int k() const noexcept { return k_; }
  double gamma() const noexcept { return gamma_; }
  const RowMatrix& lengths() const noexcept { return lengths_; }
  double length(Index i, Index j) const { return lengths_(i, j); }

  bool has_last_layer(Index i, Index j, Index layer) const {
    return (word(i, j)[layer / 64] >> (layer % 64)) & 1U;
  }

  std::vector<Index> last_layers(Index i, Index j) const {
    std::vector<Index> out;
    for (Index l = 0; l < n_layers_; ++l)
      if (has_last_layer(i, j, l)) out.push_back(l);
    return out;
  }

  friend bool operator==(const PathLengthMatrix& a, const PathLengthMatrix& b) {
    return a.n_ == b.n_ && a.n_layers_ == b.n_layers_ && a.gamma_ == b.gamma_ &&
           a.lengths_ == b.lengths_ && a.layers_ == b.layers_;
  }

  /// Same state, ignoring K.
  bool same_state(const PathLengthMatrix& other) const { return *this == other; }

 private:
  friend PathLengthMatrix one_path_matrix(const MultiplexTensor&, const CouplingParameter&);
  friend PathLengthMatrix extend_path_matrix(const PathLengthMatrix&,
                                             const ReciprocalLengthTensor&,
                                             const CouplingParameter&, unsigned);

  std::uint64_t* word(Index i, Index j) { return &layers_[static_cast<std::size_t>(i * n_ + j) * words_]; }
  const std::uint64_t* word(Index i, Index j) const {
    return &layers_[static_cast<std::size_t>(i * n_ + j) * words_];
  }

  Index n_;
  Index n_layers_;
  std::size_t words_;
  int k_;
  double gamma_;
  RowMatrix lengths_;
  std::vector<std::uint64_t> layers_;
};

/// P^1: entrywise minimum over layers of the reciprocal lengths, with the
/// set of minimizing layers.
inline PathLengthMatrix one_path_matrix(const MultiplexTensor& t, const CouplingParameter& g) {
  PathLengthMatrix p(t.n_vertices(), t.n_layers(), 1, g.value());
  for (const Entry& e : t.entries()) {
    const double len = 1.0 / e.weight;
    double& cur = p.lengths_(e.src, e.dst);
    std::uint64_t* bits = p.word(e.src, e.dst);
    if (len < cur) {
      cur = len;
      std::fill(bits, bits + p.words_, 0);
    }
    if (len == cur) bits[e.layer / 64] |= std::uint64_t{1} << (e.layer % 64);
  }
  return p;
}

/// P^{K-1} -> P^K.
///
/// p^K_ij = min over (h, l) of p^{K-1}_ih + p^(l)_hj + delta/gamma, where the
/// switch indicator delta is 0 when h = i or when l is among the last layers
/// recorded for (i, h), and 1 otherwise. The h = j term carries p^{K-1}_ij
/// over unchanged, so lengths never increase. Layer sets collect every
/// minimizing l, united with the carried set on a tie with p^{K-1}_ij.
/// Rows are independent and may be computed by several threads.
inline PathLengthMatrix extend_path_matrix(const PathLengthMatrix& p,
                                           const ReciprocalLengthTensor& t,
                                           const CouplingParameter& g, unsigned threads = 1) {
  if (p.gamma() != g.value()) throw DimensionError("path matrix was built with another gamma");
  if (p.n_vertices() != t.n_vertices() || p.n_layers() != t.n_layers())
    throw DimensionError("path matrix and reciprocal tensor dimensions differ");

  const Index n = p.n_vertices();
  const std::size_t words = p.words_;
  const double switch_cost = g.switch_cost();
  PathLengthMatrix next(n, p.n_layers(), p.k() + 1, p.gamma());

  parallel_for(0, n, threads, [&](std::ptrdiff_t i) {
    double* best = &next.lengths_(i, 0);
    for (Index h = 0; h < n; ++h) {
      const double pih = p.lengths_(i, h);
      if (pih == infinity) continue;
      for (const auto& arc : t.out_arcs(h)) {
        const Index j = arc.dst;
        if (j == i) continue;
        const bool same_layer = h == i || p.has_last_layer(i, h, arc.layer);
        const double cand = same_layer ? pih + arc.length : pih + arc.length + switch_cost;
        std::uint64_t* bits = next.word(i, j);
        if (cand < best[j]) {
          best[j] = cand;
          std::fill(bits, bits + words, 0);
        }
        if (cand == best[j]) bits[arc.layer / 64] |= std::uint64_t{1} << (arc.layer % 64);
      }
    }
    for (Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const double carry = p.lengths_(i, j);
      if (carry == infinity) continue;
      std::uint64_t* bits = next.word(i, j);
      const std::uint64_t* old = p.word(i, j);
      if (carry < best[j]) {
        best[j] = carry;
        std::copy(old, old + words, bits);
      } else if (carry == best[j]) {
        for (std::size_t w = 0; w < words; ++w) bits[w] |= old[w];
      }
    }
  });
  return next;
}

struct PathLengthResult {
  PathLengthMatrix matrix;
  /// Smallest K whose state equals the fixed point of the recursion, when a
  /// fixed point was reached within the iteration budget.
  std::optional<int> stabilization_k;
  /// Smallest K from which the lengths no longer change (only meaningful
  /// together with stabilization_k).
  int lengths_stable_k = 1;
};

/// Iterates the extension from K = 1 up to min(k_max, N - 1), stopping at a
/// fixed point. `k_max` empty means N - 1. `on_level` sees every distinct
/// level P^1, ..., P^K in order.
inline PathLengthResult path_length_matrix(
    const MultiplexTensor& t, const CouplingParameter& g, std::optional<int> k_max = {},
    unsigned threads = 1,
    const std::function<void(const PathLengthMatrix&)>& on_level = {}) {
  if (k_max && *k_max < 1) throw DimensionError("k_max must be at least 1");
  const int cap = static_cast<int>(std::max<Index>(1, t.n_vertices() - 1));
  const int limit = k_max ? std::min(*k_max, cap) : cap;

  const ReciprocalLengthTensor recip(t);
  PathLengthMatrix cur = one_path_matrix(t, g);
  if (on_level) on_level(cur);
  int lengths_stable = 1;
  std::optional<int> stable;
  if (t.n_vertices() <= 2) stable = 1;

  while (!stable && cur.k() < limit) {
    PathLengthMatrix next = extend_path_matrix(cur, recip, g, threads);
    if (next.same_state(cur)) {
      stable = cur.k();
      break;
    }
    if (next.lengths() != cur.lengths()) lengths_stable = next.k();
    cur = std::move(next);
    if (on_level) on_level(cur);
  }
  // P^{N-1} is the full path length matrix by definition.
  if (!stable && cur.k() == cap) stable = cap;
  return {std::move(cur), stable, lengths_stable};
}

}  // namespace mpx
