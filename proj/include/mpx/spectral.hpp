#pragma once

// Perron root and vectors of nonnegative matrices, the Wilkinson
// perturbation y x^T and the (structured) condition number of the Perron
// root.
//
// The solver is an explicitly restarted Arnoldi iteration started from the
// normalized all-ones vector. The Ritz value of largest real part is the
// Perron root candidate: for a nonnegative irreducible matrix every other
// eigenvalue has strictly smaller real part, even when the matrix is
// periodic and plain power iteration would oscillate.

#include <cmath>
#include <limits>
#include <string>
#include <type_traits>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "mpx/core.hpp"

namespace mpx {

struct PerronOptions {
  double tol = 1e-12;       ///< residuals must fall below tol * ||M||_F
  int max_iter = 100000;    ///< matrix-vector products per side
  int krylov_dim = 30;      ///< Arnoldi basis size before restart
};

struct PerronTriple {
  double rho = 0.0;
  Vector x;  ///< right Perron vector, unit 2-norm
  Vector y;  ///< left Perron vector, unit 2-norm
  double residual_right = 0.0;
  double residual_left = 0.0;
  int iterations = 0;
  bool irreducible = true;
};

namespace detail {

struct RitzPair {
  double value = 0.0;
  Vector vector;
  double residual = std::numeric_limits<double>::infinity();
  int matvecs = 0;
  bool converged = false;
};

/// Dominant (largest real part) eigenpair of the operator `apply`.
template <typename Apply>
RitzPair dominant_eigenpair(const Apply& apply, Index n, double abs_tol, int max_matvecs,
                            int krylov_dim) {
  RitzPair best;
  const Index m = std::min<Index>(krylov_dim, n);
  Vector v = Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  DenseMatrix basis(n, m + 1);
  DenseMatrix hess(m + 1, m);

  while (best.matvecs < max_matvecs) {
    hess.setZero();
    basis.col(0) = v;
    Index k = 0;
    for (Index j = 0; j < m; ++j) {
      Vector w = apply(basis.col(j));
      ++best.matvecs;
      const double wnorm = w.norm();
      // Two passes of classical Gram-Schmidt.
      Vector h = basis.leftCols(j + 1).transpose() * w;
      w.noalias() -= basis.leftCols(j + 1) * h;
      Vector h2 = basis.leftCols(j + 1).transpose() * w;
      w.noalias() -= basis.leftCols(j + 1) * h2;
      hess.col(j).head(j + 1) = h + h2;
      const double beta = w.norm();
      k = j + 1;
      if (beta <= 1e-14 * std::max(wnorm, 1e-300)) break;
      hess(j + 1, j) = beta;
      basis.col(j + 1) = w / beta;
    }

    Eigen::EigenSolver<DenseMatrix> es(hess.topLeftCorner(k, k));
    Index pick = 0;
    for (Index i = 1; i < k; ++i)
      if (es.eigenvalues()[i].real() > es.eigenvalues()[pick].real()) pick = i;
    Vector s = es.eigenvectors().col(pick).real();
    Vector u = basis.leftCols(k) * s;
    if (u.sum() < 0) u = -u;
    const double unorm = u.norm();
    if (!(unorm > 0)) throw NumericalError("Arnoldi produced a null Ritz vector");
    u /= unorm;

    const Vector au = apply(u);
    ++best.matvecs;
    const double theta = u.dot(au);
    const double res = (au - theta * u).norm();
    if (res < best.residual) {
      best.value = theta;
      best.vector = u;
      best.residual = res;
    }
    if (res <= abs_tol) {
      best.value = theta;
      best.vector = u;
      best.residual = res;
      best.converged = true;
      return best;
    }
    v = u;
  }
  return best;
}

template <typename Matrix>
double min_coefficient(const Matrix& m) {
  if constexpr (std::is_base_of_v<Eigen::SparseMatrixBase<Matrix>, Matrix>) {
    double lo = 0.0;
    for (Index r = 0; r < m.outerSize(); ++r)
      for (typename Matrix::InnerIterator it(m, r); it; ++it) lo = std::min(lo, it.value());
    return lo;
  } else {
    return m.size() ? std::min(0.0, m.minCoeff()) : 0.0;
  }
}

}  // namespace detail

/// Perron triple of a square nonnegative matrix (dense or sparse Eigen
/// type). Throws NumericalError when either side does not converge.
template <typename Matrix>
PerronTriple perron(const Matrix& m, const PerronOptions& opt = {}) {
  if (m.rows() != m.cols()) throw DimensionError("perron needs a square matrix");
  if (m.rows() == 0) throw DimensionError("perron needs a nonempty matrix");
  if (detail::min_coefficient(m) < 0.0) throw NumericalError("matrix has negative entries");

  const Index n = m.rows();
  PerronTriple t;
  if constexpr (std::is_base_of_v<Eigen::SparseMatrixBase<Matrix>, Matrix>)
    t.irreducible = is_irreducible(SparseMatrix(m));
  else
    t.irreducible = is_irreducible(DenseMatrix(m));

  const double norm_f = m.norm();
  if (norm_f == 0.0) {
    t.x = t.y = Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    return t;
  }
  const double abs_tol = opt.tol * norm_f;

  auto right = detail::dominant_eigenpair([&](const auto& v) -> Vector { return m * v; }, n,
                                          abs_tol, opt.max_iter, opt.krylov_dim);
  if (!right.converged)
    throw NumericalError(fmt::format("right Perron vector did not converge (residual {:.3e})",
                                     right.residual));
  auto left = detail::dominant_eigenpair(
      [&](const auto& v) -> Vector { return m.transpose() * v; }, n, abs_tol, opt.max_iter,
      opt.krylov_dim);
  if (!left.converged)
    throw NumericalError(fmt::format("left Perron vector did not converge (residual {:.3e})",
                                     left.residual));

  t.rho = right.value;
  t.x = right.vector;
  t.y = left.vector;
  t.residual_right = right.residual;
  t.residual_left = (Vector(m.transpose() * t.y) - t.rho * t.y).norm();
  t.iterations = right.matvecs + left.matvecs;
  if (std::abs(left.value - right.value) > 1e3 * abs_tol + 1e-10 * std::abs(right.value))
    throw NumericalError(fmt::format("left and right Perron roots disagree: {} vs {}",
                                     right.value, left.value));
  return t;
}

/// Spectral radius of a square nonnegative matrix, reducible or not: the
/// largest Perron root over the irreducible diagonal blocks of its
/// Frobenius normal form. A 1 x 1 block contributes its diagonal entry.
/// Unlike an eigensolver applied to the whole matrix, this returns exact
/// zeros for nilpotent parts instead of roundoff-sized roots of defective
/// eigenvalues.
template <typename Matrix>
double spectral_radius(const Matrix& m, const PerronOptions& opt = {}) {
  if (m.rows() != m.cols()) throw DimensionError("spectral_radius needs a square matrix");
  if (detail::min_coefficient(m) < 0.0) throw NumericalError("matrix has negative entries");
  const SparseMatrix s = [&] {
    if constexpr (std::is_base_of_v<Eigen::SparseMatrixBase<Matrix>, Matrix>)
      return SparseMatrix(m);
    else
      return SparseMatrix(DenseMatrix(m).sparseView());
  }();
  double rho = 0.0;
  for (const auto& comp : strong_components(s)) {
    if (comp.size() == 1) {
      rho = std::max(rho, s.coeff(comp[0], comp[0]));
      continue;
    }
    const Index k = static_cast<Index>(comp.size());
    DenseMatrix block(k, k);
    for (Index r = 0; r < k; ++r)
      for (Index c = 0; c < k; ++c) block(r, c) = s.coeff(comp[r], comp[c]);
    rho = std::max(rho, perron(block, opt).rho);
  }
  return rho;
}

/// Rank-one Wilkinson perturbation W = y x^T, kept in factored form.
class WilkinsonMatrix {
 public:
  WilkinsonMatrix(Vector y, Vector x) : y_(std::move(y)), x_(std::move(x)) {
    if (y_.size() != x_.size()) throw DimensionError("Wilkinson factors differ in length");
  }

  Index dimension() const noexcept { return x_.size(); }
  double operator()(Index i, Index j) const { return y_(i) * x_(j); }
  const Vector& left() const noexcept { return y_; }
  const Vector& right() const noexcept { return x_; }

  DenseMatrix dense() const { return y_ * x_.transpose(); }
  double frobenius_norm() const { return y_.norm() * x_.norm(); }
  /// 1^T W 1 = ||y||_1 ||x||_1 for positive factors.
  double sum() const { return y_.sum() * x_.sum(); }

  double frobenius_norm_on(const SparsityPattern& s) const {
    check(s);
    double acc = 0.0;
    for (const auto& [i, j] : s.positions()) {
      const double w = (*this)(i, j);
      acc += w * w;
    }
    return std::sqrt(acc);
  }

  double sum_on(const SparsityPattern& s) const {
    check(s);
    double acc = 0.0;
    for (const auto& [i, j] : s.positions()) acc += (*this)(i, j);
    return acc;
  }

  /// W|_S, the projection onto the cone of matrices supported on S.
  SparseMatrix projected(const SparsityPattern& s) const {
    check(s);
    std::vector<Eigen::Triplet<double, Index>> trips;
    trips.reserve(s.size());
    for (const auto& [i, j] : s.positions()) trips.emplace_back(i, j, (*this)(i, j));
    SparseMatrix m(dimension(), dimension());
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
  }

 private:
  void check(const SparsityPattern& s) const {
    if (s.dimension() != dimension()) throw DimensionError("pattern and Wilkinson matrix differ in size");
  }

  Vector y_;
  Vector x_;
};

inline WilkinsonMatrix wilkinson(const PerronTriple& t) { return WilkinsonMatrix(t.y, t.x); }

/// kappa(rho) = 1 / (y^T x).
inline double condition_number(const PerronTriple& t) {
  const double yx = t.y.dot(t.x);
  if (!(yx > 1e-14))
    throw NumericalError(fmt::format("y^T x = {:.3e} is too small for a meaningful condition number", yx));
  return 1.0 / yx;
}

/// kappa_struct(rho) = ||W|_S||_F / (y^T x).
inline double structured_condition_number(const PerronTriple& t, const SparsityPattern& s) {
  return condition_number(t) * wilkinson(t).frobenius_norm_on(s);
}

/// First-order shift of the Perron root of M + eps E: eps y^T E x / y^T x.
inline double rho_perturbation_estimate(const PerronTriple& t, const DenseMatrix& e, double eps) {
  if (e.rows() != t.x.size() || e.cols() != t.x.size())
    throw DimensionError("perturbation size differs from the Perron vectors");
  if (!(eps > 0.0)) throw DimensionError("eps must be positive");
  return eps * t.y.dot(e * t.x) / t.y.dot(t.x);
}

}  // namespace mpx
