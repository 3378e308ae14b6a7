#pragma once

// Brute-force references for tests and diagnostics. None of these share code
// with the main analysis path: shortest paths are a dynamic program over
// (vertex, last layer) states, the exponential comes from Eigen's
// MatrixFunctions module and eigenpairs from a full dense eigensolver.
// Every routine has a size guard and throws when it is exceeded.

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "mpx/core.hpp"
#include "mpx/spectral.hpp"

namespace mpx::oracle {

inline constexpr Index max_path_vertices = 64;
inline constexpr Index max_exp_size = 1000;
inline constexpr Index max_eigen_size = 500;

/// d(i, j, l): cheapest walk from i to j with at most k intra-layer edges
/// whose final edge lies in layer l.
struct LayerStateDistance {
  int k = 0;
  Index n_vertices = 0;
  Index n_layers = 0;
  std::vector<double> d;

  double operator()(Index i, Index j, Index l) const {
    return d[static_cast<std::size_t>((i * n_vertices + j) * n_layers + l)];
  }
};

inline LayerStateDistance exact_layer_state_distances(const MultiplexTensor& t,
                                                      const CouplingParameter& g, int k) {
  const Index n = t.n_vertices();
  const Index layers = t.n_layers();
  if (n > max_path_vertices) throw DimensionError("path oracle is limited to 64 vertices");
  if (k < 1) throw DimensionError("k must be at least 1");
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double switch_cost = 1.0 / g.value();

  LayerStateDistance out{k, n, layers, std::vector<double>(static_cast<std::size_t>(n * n * layers), inf)};
  std::vector<double> cur(static_cast<std::size_t>(n * layers));
  for (Index i = 0; i < n; ++i) {
    std::fill(cur.begin(), cur.end(), inf);
    for (int round = 0; round < k; ++round) {
      std::vector<double> next = cur;
      for (const Entry& e : t.entries()) {
        const double w = 1.0 / e.weight;
        auto& target = next[static_cast<std::size_t>(e.dst * layers + e.layer)];
        if (e.src == i) target = std::min(target, w);  // first edge: no switch
        for (Index lp = 0; lp < layers; ++lp) {
          const double base = cur[static_cast<std::size_t>(e.src * layers + lp)];
          if (base == inf) continue;
          target = std::min(target, base + w + (lp == e.layer ? 0.0 : switch_cost));
        }
      }
      cur = std::move(next);
    }
    std::copy(cur.begin(), cur.end(), out.d.begin() + static_cast<std::ptrdiff_t>(i * n * layers));
  }
  return out;
}

/// Exact shortest lengths over layer-assigned walks with at most k
/// intra-layer edges, switch cost 1/gamma.
inline DenseMatrix exact_k_path_lengths(const MultiplexTensor& t, const CouplingParameter& g, int k) {
  const auto d = exact_layer_state_distances(t, g, k);
  const Index n = t.n_vertices();
  DenseMatrix p = DenseMatrix::Constant(n, n, std::numeric_limits<double>::infinity());
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      if (i == j) {
        p(i, j) = 0.0;
        continue;
      }
      for (Index l = 0; l < t.n_layers(); ++l) p(i, j) = std::min(p(i, j), d(i, j, l));
    }
  return p;
}

/// 1^T exp(B) 1 - size, with exp(B) from Eigen's matrix exponential.
inline double dense_exp_quadratic_form(const DenseMatrix& b) {
  if (b.rows() != b.cols()) throw DimensionError("exp oracle needs a square matrix");
  if (b.rows() > max_exp_size) throw DimensionError("exp oracle is limited to 1000 x 1000");
  const DenseMatrix e = b.exp();
  return e.sum() - static_cast<double>(b.rows());
}

struct DensePerron {
  PerronTriple triple;
  double second_modulus = 0.0;  ///< largest |lambda| among the other eigenvalues
};

namespace detail {

inline Index largest_real_part(const Eigen::VectorXcd& ev) {
  Index pick = 0;
  for (Index i = 1; i < ev.size(); ++i)
    if (ev[i].real() > ev[pick].real()) pick = i;
  return pick;
}

inline Vector positive_unit(const Eigen::VectorXcd& v) {
  Vector r = v.real();
  if (r.sum() < 0) r = -r;
  return r / r.norm();
}

}  // namespace detail

inline DensePerron dense_perron(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("eigen oracle needs a square matrix");
  if (m.rows() > max_eigen_size) throw DimensionError("eigen oracle is limited to 500 x 500");
  Eigen::EigenSolver<DenseMatrix> right(m);
  Eigen::EigenSolver<DenseMatrix> left(m.transpose());
  const Index pr = detail::largest_real_part(right.eigenvalues());
  const Index pl = detail::largest_real_part(left.eigenvalues());

  DensePerron out;
  out.triple.rho = right.eigenvalues()[pr].real();
  out.triple.x = detail::positive_unit(right.eigenvectors().col(pr));
  out.triple.y = detail::positive_unit(left.eigenvectors().col(pl));
  out.triple.residual_right = (m * out.triple.x - out.triple.rho * out.triple.x).norm();
  out.triple.residual_left =
      (m.transpose() * out.triple.y - out.triple.rho * out.triple.y).norm();
  for (Index i = 0; i < right.eigenvalues().size(); ++i)
    if (i != pr) out.second_modulus = std::max(out.second_modulus, std::abs(right.eigenvalues()[i]));
  return out;
}

}  // namespace mpx::oracle
