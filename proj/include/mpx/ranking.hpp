#pragma once

// Edge recommendation.
//
// Efficiency approach: the Perron vectors (x_K, y_K) of the K-efficiency
// matrix define W^K = y_K x_K^T; restricted to the pattern of A+ its largest
// entries point at the vertex pairs whose existing edges should be
// strengthened.
//
// Popularity approach: the Perron vectors of B(gamma) define W_NL; each
// intra-layer entry a_ij^(l) is scored by a_ij^(l) * y_{lN+i} * x_{lN+j}
// (or by the Wilkinson entry alone in the unweighted variant).
//
// Undirected multiplexes report each edge once, oriented from the larger to
// the smaller index, with the larger of the two directed scores.

#include <algorithm>
#include <optional>
#include <tuple>
#include <vector>

#include "mpx/communicability.hpp"
#include "mpx/efficiency.hpp"
#include "mpx/spectral.hpp"
#include "mpx/tropical.hpp"

namespace mpx {

enum class Approach { efficiency, popularity };
enum class ImportanceWeighting { weighted, unweighted };

struct EdgeRecommendation {
  Approach approach = Approach::efficiency;
  Index src = 0;
  Index dst = 0;
  std::vector<Index> layers;
  double score = 0.0;
  int rank = 0;
  bool undirected = false;
};

namespace detail {

inline void sort_and_rank(std::vector<EdgeRecommendation>& recs, int top) {
  std::sort(recs.begin(), recs.end(), [](const auto& a, const auto& b) {
    if (a.score != b.score) return a.score > b.score;
    const Index la = a.layers.empty() ? 0 : a.layers.front();
    const Index lb = b.layers.empty() ? 0 : b.layers.front();
    return std::tie(a.src, a.dst, la) < std::tie(b.src, b.dst, lb);
  });
  if (top >= 0 && static_cast<std::size_t>(top) < recs.size()) recs.resize(static_cast<std::size_t>(top));
  for (std::size_t k = 0; k < recs.size(); ++k) recs[k].rank = static_cast<int>(k) + 1;
}

}  // namespace detail

/// Ranks the vertex pairs of A+ by the entries of y x^T from the Perron
/// triple of an efficiency matrix. `top` < 0 keeps every candidate.
inline std::vector<EdgeRecommendation> select_efficient_edges(const MultiplexTensor& t,
                                                              const PerronTriple& perron_k,
                                                              int top) {
  if (perron_k.x.size() != t.n_vertices())
    throw DimensionError("Perron vectors do not match the vertex count");
  const WilkinsonMatrix w = wilkinson(perron_k);
  // Entries are grouped by layer; collect the layers per vertex pair.
  std::vector<std::tuple<Index, Index, Index>> pairs;
  for (const Entry& e : t.entries()) pairs.emplace_back(e.src, e.dst, e.layer);
  std::sort(pairs.begin(), pairs.end());

  std::vector<EdgeRecommendation> recs;
  for (std::size_t k = 0; k < pairs.size();) {
    const auto [i, j, l0] = pairs[k];
    EdgeRecommendation r;
    r.approach = Approach::efficiency;
    r.undirected = t.undirected();
    while (k < pairs.size() && std::get<0>(pairs[k]) == i && std::get<1>(pairs[k]) == j)
      r.layers.push_back(std::get<2>(pairs[k++]));
    if (t.undirected()) {
      if (i < j) continue;  // handled from the (j, i) side
      r.score = std::max(w(i, j), w(j, i));
    } else {
      r.score = w(i, j);
    }
    r.src = i;
    r.dst = j;
    if (r.score > 0.0) recs.push_back(std::move(r));
  }
  detail::sort_and_rank(recs, top);
  return recs;
}

struct EfficiencyRanking {
  int k = 0;
  std::optional<int> stabilization_k;
  double efficiency = 0.0;
  PerronTriple perron;
  std::vector<EdgeRecommendation> edges;
};

inline EfficiencyRanking rank_edges_efficiency(const MultiplexTensor& t, const CouplingParameter& g,
                                               std::optional<int> k, int top,
                                               unsigned threads = 1,
                                               const PerronOptions& opt = {}) {
  if (top < 1) throw DimensionError("top must be at least 1");
  auto paths = path_length_matrix(t, g, k, threads);
  const EfficiencyMatrix q = efficiency_matrix(paths.matrix);
  EfficiencyRanking out;
  out.k = paths.matrix.k();
  out.stabilization_k = paths.stabilization_k;
  out.efficiency = global_k_efficiency(q);
  out.perron = perron(q.matrix, opt);
  out.edges = select_efficient_edges(t, out.perron, top);
  return out;
}

/// Importance of every tensor entry under the Perron triple of B(gamma).
inline std::vector<EdgeRecommendation> select_popular_edges(
    const MultiplexTensor& t, const PerronTriple& perron_b, int top,
    ImportanceWeighting weighting = ImportanceWeighting::weighted) {
  const Index n = t.n_vertices();
  if (perron_b.x.size() != n * t.n_layers())
    throw DimensionError("Perron vectors do not match the supra-adjacency size");
  const WilkinsonMatrix w = wilkinson(perron_b);
  auto importance = [&](Index l, Index i, Index j, double a) {
    const double wij = w(l * n + i, l * n + j);
    return weighting == ImportanceWeighting::weighted ? a * wij : wij;
  };

  std::vector<EdgeRecommendation> recs;
  for (const Entry& e : t.entries()) {
    if (t.undirected() && e.src < e.dst) continue;
    EdgeRecommendation r;
    r.approach = Approach::popularity;
    r.undirected = t.undirected();
    r.src = e.src;
    r.dst = e.dst;
    r.layers = {e.layer};
    r.score = importance(e.layer, e.src, e.dst, e.weight);
    if (t.undirected()) r.score = std::max(r.score, importance(e.layer, e.dst, e.src, e.weight));
    if (r.score > 0.0) recs.push_back(std::move(r));
  }
  detail::sort_and_rank(recs, top);
  return recs;
}

struct PopularityRanking {
  PerronTriple perron;
  std::vector<EdgeRecommendation> edges;
};

inline PopularityRanking rank_edges_popularity(
    const MultiplexTensor& t, const CouplingParameter& g, int top,
    ImportanceWeighting weighting = ImportanceWeighting::weighted, const PerronOptions& opt = {}) {
  if (top < 1) throw DimensionError("top must be at least 1");
  PopularityRanking out;
  out.perron = perron(build_supra(t, g).matrix, opt);
  out.edges = select_popular_edges(t, out.perron, top, weighting);
  return out;
}

struct EdgeTarget {
  Index layer = 0;
  Index src = 0;
  Index dst = 0;
};

struct Perturbation {
  enum class Mode { add_absolute, scale } mode = Mode::add_absolute;
  double amount = 0.0;
};

/// New tensor with the target weights changed. Undirected tensors update
/// both orientations; listing both orientations changes the edge once.
inline MultiplexTensor apply_perturbation(const MultiplexTensor& t,
                                          const std::vector<EdgeTarget>& targets,
                                          const Perturbation& p) {
  std::vector<double> weights;
  weights.reserve(t.entries().size());
  for (const Entry& e : t.entries()) weights.push_back(e.weight);
  std::vector<char> touched(weights.size(), 0);

  auto locate = [&](Index l, Index i, Index j) -> std::size_t {
    const Entry key{l, i, j, 0.0};
    auto it = std::lower_bound(t.entries().begin(), t.entries().end(), key, canonical_less);
    if (it == t.entries().end() || it->layer != l || it->src != i || it->dst != j)
      throw DataError("perturbation target (" + t.layer_label(l) + ", " + t.vertex_label(i) +
                      ", " + t.vertex_label(j) + ") is not an edge of the multiplex");
    return static_cast<std::size_t>(it - t.entries().begin());
  };
  auto update = [&](std::size_t k) {
    if (touched[k]) return;
    touched[k] = 1;
    weights[k] = p.mode == Perturbation::Mode::scale ? weights[k] * p.amount : weights[k] + p.amount;
    if (!(weights[k] > 0.0)) throw DataError("perturbation makes an edge weight nonpositive");
  };

  for (const EdgeTarget& target : targets) {
    if (target.layer < 0 || target.layer >= t.n_layers() || target.src < 0 ||
        target.src >= t.n_vertices() || target.dst < 0 || target.dst >= t.n_vertices())
      throw DataError("perturbation target index out of range");
    update(locate(target.layer, target.src, target.dst));
    if (t.undirected()) update(locate(target.layer, target.dst, target.src));
  }
  return t.with_weights(weights);
}

struct Measures {
  double efficiency = 0.0;
  double tc = 0.0;
  double log_tc = 0.0;
  double rho_supra = 0.0;
  double rho_efficiency = 0.0;
};

struct MeasureComparison {
  Measures before;
  Measures after;
  Measures delta;  ///< after - before (log_tc delta is the log ratio)
};

inline Measures evaluate_measures(const MultiplexTensor& t, const CouplingParameter& g,
                                  unsigned threads = 1,
                                  const CommunicabilityOptions& opt = {}) {
  Measures m;
  auto paths = path_length_matrix(t, g, std::nullopt, threads);
  const EfficiencyMatrix q = efficiency_matrix(paths.matrix);
  m.efficiency = global_k_efficiency(q);
  m.rho_efficiency = perron(q.matrix, opt.perron).rho;
  const SupraAdjacency b = build_supra(t, g);
  const auto tc = total_communicability(b, opt);
  m.tc = tc.value;
  m.log_tc = tc.log_value;
  m.rho_supra = perron(b.matrix, opt.perron).rho;
  return m;
}

inline MeasureComparison compare_measures(const MultiplexTensor& before,
                                          const MultiplexTensor& after,
                                          const CouplingParameter& g, unsigned threads = 1,
                                          const CommunicabilityOptions& opt = {}) {
  if (before.n_vertices() != after.n_vertices() || before.n_layers() != after.n_layers())
    throw DimensionError("compared multiplexes differ in size");
  MeasureComparison c;
  c.before = evaluate_measures(before, g, threads, opt);
  c.after = evaluate_measures(after, g, threads, opt);
  c.delta.efficiency = c.after.efficiency - c.before.efficiency;
  c.delta.tc = c.after.tc - c.before.tc;
  c.delta.log_tc = c.after.log_tc - c.before.log_tc;
  c.delta.rho_supra = c.after.rho_supra - c.before.rho_supra;
  c.delta.rho_efficiency = c.after.rho_efficiency - c.before.rho_efficiency;
  return c;
}

}  // namespace mpx
