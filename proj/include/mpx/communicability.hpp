#pragma once

// Total communicability tc = 1^T exp0(B) 1 with exp0(t) = exp(t) - 1, the
// Perron communicability Pc = exp0(rho) 1^T W 1 and its restriction to a
// sparsity pattern.
//
// exp0(B) 1 is taken from the last column of exp of the bordered matrix
//
//   [ B  c B 1 ]
//   [ 0    0   ]
//
// whose top-right block equals c (exp(B) - I) 1. This avoids forming
// 1^T exp(B) 1 - NL, which cancels when B is small.

#include <cmath>
#include <string>
#include <vector>

#include "mpx/core.hpp"
#include "mpx/expm.hpp"
#include "mpx/spectral.hpp"

namespace mpx {

enum class ExpMethod { automatic, dense, krylov };

struct CommunicabilityOptions {
  ExpMethod method = ExpMethod::automatic;
  Index dense_limit = 1000;   ///< automatic uses the dense kernel up to this size
  int krylov_dim = 50;
  double krylov_tol = 1e-10;
  PerronOptions perron;
};

struct TotalCommunicability {
  double value = 0.0;
  double log_value = 0.0;  ///< natural log, finite even when value overflows
  ExpMethod method = ExpMethod::dense;
  double error_estimate = 0.0;
  int matvecs = 0;
};

/// log(exp(x) - 1), accurate for small and for large x.
inline double log_exp0(double x) {
  if (x > 30.0) return x + std::log1p(-std::exp(-x));
  return std::log(std::expm1(x));
}

namespace detail {

inline double inf_norm(const SparseMatrix& b) {
  double best = 0.0;
  for (Index r = 0; r < b.outerSize(); ++r) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(b, r); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

}  // namespace detail

inline TotalCommunicability total_communicability(const SparseMatrix& b,
                                                  const CommunicabilityOptions& opt = {}) {
  if (b.rows() != b.cols()) throw DimensionError("total communicability needs a square matrix");
  const Index n = b.rows();
  TotalCommunicability out;
  out.method = opt.method == ExpMethod::automatic
                   ? (n <= opt.dense_limit ? ExpMethod::dense : ExpMethod::krylov)
                   : opt.method;

  const Vector row_sums = b * Vector::Ones(n);
  const double scale_max = row_sums.size() ? row_sums.maxCoeff() : 0.0;
  if (scale_max == 0.0) {
    out.value = 0.0;
    out.log_value = -std::numeric_limits<double>::infinity();
    return out;
  }
  const double c = 1.0 / scale_max;

  Vector col;  // c * exp0(B) 1
  if (out.method == ExpMethod::dense) {
    DenseMatrix bordered = DenseMatrix::Zero(n + 1, n + 1);
    bordered.topLeftCorner(n, n) = DenseMatrix(b);
    bordered.col(n).head(n) = c * row_sums;
    col = dense_expm(bordered).col(n).head(n);
  } else {
    const Vector cb1 = c * row_sums;
    auto apply = [&](const auto& v) -> Vector {
      Vector r(n + 1);
      r.head(n) = b * v.head(n) + v(n) * cb1;
      r(n) = 0.0;
      return r;
    };
    Vector start = Vector::Zero(n + 1);
    start(n) = 1.0;
    const double anorm = detail::inf_norm(b) + 1.0;
    KrylovResult kr =
        krylov_expv(apply, start, anorm, KrylovOptions{opt.krylov_dim, opt.krylov_tol, 100000});
    col = kr.w.head(n);
    out.error_estimate = kr.error_estimate;
    out.matvecs = kr.matvecs;
  }
  out.value = col.sum() / c;
  if (std::isfinite(out.value) && out.value > 0.0) {
    out.log_value = std::log(out.value);
    return out;
  }

  // Overflow: tc = e^sigma 1^T exp(B - sigma I) 1 - NL, the NL term being
  // negligible at this magnitude.
  const double sigma = detail::inf_norm(b);
  Vector w;
  if (out.method == ExpMethod::dense) {
    w = dense_expm(DenseMatrix(b) - sigma * DenseMatrix::Identity(n, n)) * Vector::Ones(n);
  } else {
    auto apply = [&](const auto& v) -> Vector { return b * v - sigma * v; };
    w = krylov_expv(apply, Vector::Ones(n), 2.0 * sigma,
                    KrylovOptions{opt.krylov_dim, opt.krylov_tol, 100000})
            .w;
  }
  out.log_value = sigma + std::log(w.sum());
  out.value = std::numeric_limits<double>::infinity();
  return out;
}

inline TotalCommunicability total_communicability(const SupraAdjacency& b,
                                                  const CommunicabilityOptions& opt = {}) {
  return total_communicability(b.matrix, opt);
}

/// Pc = exp0(rho) ||x||_1 ||y||_1.
inline double perron_communicability(const PerronTriple& t) {
  return std::expm1(t.rho) * t.x.lpNorm<1>() * t.y.lpNorm<1>();
}

inline double log_perron_communicability(const PerronTriple& t) {
  return log_exp0(t.rho) + std::log(t.x.lpNorm<1>()) + std::log(t.y.lpNorm<1>());
}

/// Pc_struct = exp0(rho) sum over S of y_i x_j.
inline double structured_perron_communicability(const PerronTriple& t, const SparsityPattern& s) {
  return std::expm1(t.rho) * wilkinson(t).sum_on(s);
}

struct CommunicabilityReport {
  double tc = 0.0;
  double log_tc = 0.0;
  double pc = 0.0;
  double log_pc = 0.0;
  double pc_struct = 0.0;
  double rho = 0.0;
  double kappa = 0.0;
  double kappa_struct = 0.0;
  double bound_lo = 0.0;         ///< exp0(rho)
  double bound_hi = 0.0;         ///< NL exp0(rho)
  double bound_hi_struct = 0.0;  ///< NL exp0(rho) kappa_struct / kappa
  double approx_ratio = 0.0;     ///< tc / (kappa Pc)
  double residual_right = 0.0;
  double residual_left = 0.0;
  ExpMethod method = ExpMethod::dense;
  bool irreducible = true;
  std::vector<std::string> violations;
};

/// Evaluates every quantity and checks the Perron communicability bounds
/// (relative slack 1e-10). A recorded violation points at a solver failure.
inline CommunicabilityReport communicability_report(const SparseMatrix& b,
                                                    const SparsityPattern& s,
                                                    const CommunicabilityOptions& opt = {}) {
  if (s.dimension() != b.rows()) throw DimensionError("pattern and matrix sizes differ");
  CommunicabilityReport r;
  const auto tc = total_communicability(b, opt);
  r.tc = tc.value;
  r.log_tc = tc.log_value;
  r.method = tc.method;

  const PerronTriple t = perron(b, opt.perron);
  const double n = static_cast<double>(b.rows());
  r.rho = t.rho;
  r.residual_right = t.residual_right;
  r.residual_left = t.residual_left;
  r.irreducible = t.irreducible;
  r.kappa = condition_number(t);
  r.kappa_struct = structured_condition_number(t, s);
  r.pc = perron_communicability(t);
  r.log_pc = log_perron_communicability(t);
  r.pc_struct = structured_perron_communicability(t, s);
  r.bound_lo = std::expm1(t.rho);
  r.bound_hi = n * r.bound_lo;
  r.bound_hi_struct = r.bound_hi * r.kappa_struct / r.kappa;
  r.approx_ratio = r.tc / (r.kappa * r.pc);

  constexpr double slack = 1e-10;
  auto check = [&](double lhs, double rhs, const char* what) {
    if (lhs > rhs * (1.0 + slack)) r.violations.emplace_back(what);
  };
  check(r.bound_lo, r.pc, "exp0(rho) <= Pc");
  check(r.pc, r.bound_hi, "Pc <= NL exp0(rho)");
  check(r.pc_struct, r.pc, "Pc_struct <= Pc");
  check(r.pc_struct, r.bound_hi_struct, "Pc_struct <= NL exp0(rho) kappa_struct / kappa");
  check(r.kappa_struct, r.kappa, "kappa_struct <= kappa");
  return r;
}

inline CommunicabilityReport communicability_report(const SupraAdjacency& b,
                                                    const SparsityPattern& s,
                                                    const CommunicabilityOptions& opt = {}) {
  return communicability_report(b.matrix, s, opt);
}

}  // namespace mpx
