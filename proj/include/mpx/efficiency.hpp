#pragma once

// Efficiency matrices (entrywise reciprocals of path lengths), global
// K-efficiency, harmonic centralities and the spectral bounds that tie them
// to the Perron root of the efficiency matrix.

#include <string>
#include <vector>

#include "mpx/tropical.hpp"

namespace mpx {

struct EfficiencyMatrix {
  int k = 0;
  DenseMatrix matrix;  ///< 1/p_ij off the diagonal, 1/inf = 0, zero diagonal

  Index n_vertices() const noexcept { return matrix.rows(); }
};

inline EfficiencyMatrix efficiency_matrix(const PathLengthMatrix& p) {
  const Index n = p.n_vertices();
  EfficiencyMatrix q{p.k(), DenseMatrix::Zero(n, n)};
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j && p.length(i, j) != infinity) q.matrix(i, j) = 1.0 / p.length(i, j);
  return q;
}

/// e^K = 1^T P^K_{-1} 1 / (N (N - 1)).
inline double global_k_efficiency(const EfficiencyMatrix& q) {
  const Index n = q.n_vertices();
  if (n < 2) throw DimensionError("global efficiency needs at least two vertices");
  return q.matrix.sum() / (static_cast<double>(n) * static_cast<double>(n - 1));
}

struct HarmonicCentralities {
  Vector in;   ///< column sums
  Vector out;  ///< row sums
};

inline HarmonicCentralities harmonic_centralities(const EfficiencyMatrix& q) {
  return {q.matrix.colwise().sum().transpose(), q.matrix.rowwise().sum()};
}

struct EfficiencyCertificates {
  double efficiency = 0.0;
  double normalized_in = 0.0;   ///< ||h_in||_1 / (N (N - 1))
  double normalized_out = 0.0;  ///< ||h_out||_1 / (N (N - 1))
  double rho = 0.0;
  double harmonic_bound = 0.0;    ///< min(||h_in||_inf, ||h_out||_inf)
  double efficiency_bound = 0.0;  ///< N (N - 1) e^K
  double harmonic_slack = 0.0;
  double efficiency_slack = 0.0;
  bool identities_hold = false;
  bool bounds_hold = false;

  bool pass() const noexcept { return identities_hold && bounds_hold; }
};

/// Checks e^K = ||h_in||_1 / (N(N-1)) = ||h_out||_1 / (N(N-1)) to 1e-12
/// relative, and rho_K <= min(||h_in||_inf, ||h_out||_inf) <= N(N-1) e^K
/// with an absolute slack of 1e-10 on the Perron root.
inline EfficiencyCertificates efficiency_certificates(const EfficiencyMatrix& q, double rho_k) {
  EfficiencyCertificates c;
  const double nn = static_cast<double>(q.n_vertices()) * static_cast<double>(q.n_vertices() - 1);
  const auto h = harmonic_centralities(q);
  c.efficiency = global_k_efficiency(q);
  c.normalized_in = h.in.lpNorm<1>() / nn;
  c.normalized_out = h.out.lpNorm<1>() / nn;
  c.rho = rho_k;
  c.harmonic_bound = std::min(h.in.lpNorm<Eigen::Infinity>(), h.out.lpNorm<Eigen::Infinity>());
  c.efficiency_bound = nn * c.efficiency;
  c.harmonic_slack = c.harmonic_bound - rho_k;
  c.efficiency_slack = c.efficiency_bound - rho_k;

  const double scale = std::max(c.efficiency, 1e-300);
  c.identities_hold = std::abs(c.normalized_in - c.efficiency) <= 1e-12 * scale &&
                      std::abs(c.normalized_out - c.efficiency) <= 1e-12 * scale;
  c.bounds_hold = c.harmonic_slack >= -1e-10 && c.efficiency_slack >= -1e-10;
  return c;
}

}  // namespace mpx
