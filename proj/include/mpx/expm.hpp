#pragma once

// Matrix exponential kernels.
//
// dense_expm: degree-13 Pade approximant with scaling and squaring.
// krylov_expv: exp(A) v by Arnoldi projection with adaptive sub-stepping
// and the a posteriori error estimate of the augmented Hessenberg matrix
// (the scheme popularized by Expokit).

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "mpx/core.hpp"

namespace mpx {

inline DenseMatrix dense_expm(const DenseMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("expm needs a square matrix");
  const Index n = a.rows();
  if (n == 0) return a;

  static constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
      129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
      1323241920.0,        40840800.0,          960960.0,           16380.0,
      182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;

  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > theta13) squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
  const DenseMatrix s = a / std::ldexp(1.0, squarings);

  const DenseMatrix id = DenseMatrix::Identity(n, n);
  const DenseMatrix s2 = s * s;
  const DenseMatrix s4 = s2 * s2;
  const DenseMatrix s6 = s4 * s2;
  const DenseMatrix u_inner = s6 * (b[13] * s6 + b[11] * s4 + b[9] * s2) + b[7] * s6 +
                              b[5] * s4 + b[3] * s2 + b[1] * id;
  const DenseMatrix u = s * u_inner;
  const DenseMatrix v =
      s6 * (b[12] * s6 + b[10] * s4 + b[8] * s2) + b[6] * s6 + b[4] * s4 + b[2] * s2 + b[0] * id;
  DenseMatrix r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) r = r * r;
  return r;
}

struct KrylovOptions {
  int krylov_dim = 50;
  double tol = 1e-10;   ///< local relative error per unit step
  int max_steps = 100000;
};

struct KrylovResult {
  Vector w;
  double error_estimate = 0.0;  ///< accumulated relative error estimate
  int steps = 0;
  int matvecs = 0;
};

/// w = exp(A) v for the operator `apply` of size n with ||A||_inf <= anorm.
template <typename Apply>
KrylovResult krylov_expv(const Apply& apply, const Vector& v, double anorm,
                         const KrylovOptions& opt = {}) {
  const Index n = v.size();
  KrylovResult res;
  res.w = v;
  double beta = v.norm();
  if (beta == 0.0 || anorm == 0.0) return res;

  const Index m = std::min<Index>(opt.krylov_dim, n);
  const double tol = opt.tol;
  const double btol = 1e-13 * anorm;  // happy breakdown threshold
  constexpr double delta = 1.2;
  constexpr double safety = 0.9;
  constexpr int max_reject = 20;

  auto round2 = [](double t) {
    const double s = std::pow(10.0, std::floor(std::log10(t)) - 1.0);
    return std::ceil(t / s) * s;
  };
  const double fact = std::pow((m + 1) / std::numbers::e, m + 1) *
                      std::sqrt(2.0 * std::numbers::pi * (m + 1));
  double xm = 1.0 / static_cast<double>(m);
  double t_new = round2((1.0 / anorm) * std::pow((fact * tol) / (4.0 * anorm), xm));
  double t_now = 0.0;
  constexpr double t_out = 1.0;

  DenseMatrix basis(n, m + 1);
  DenseMatrix hess(m + 2, m + 2);
  while (t_now < t_out) {
    if (++res.steps > opt.max_steps)
      throw NumericalError(fmt::format("Krylov expv exceeded {} steps (error estimate {:.3e})",
                                       opt.max_steps, res.error_estimate));
    double t_step = std::min(t_out - t_now, t_new);
    hess.setZero();
    basis.col(0) = res.w / beta;

    Index mb = m;
    int k1 = 2;
    for (Index j = 0; j < m; ++j) {
      Vector p = apply(basis.col(j));
      ++res.matvecs;
      for (Index i = 0; i <= j; ++i) {
        hess(i, j) = basis.col(i).dot(p);
        p.noalias() -= hess(i, j) * basis.col(i);
      }
      // Reorthogonalize once.
      for (Index i = 0; i <= j; ++i) {
        const double c = basis.col(i).dot(p);
        hess(i, j) += c;
        p.noalias() -= c * basis.col(i);
      }
      const double s = p.norm();
      if (s < btol) {
        k1 = 0;
        mb = j + 1;
        t_step = t_out - t_now;
        break;
      }
      hess(j + 1, j) = s;
      basis.col(j + 1) = p / s;
    }
    double avnorm = 0.0;
    if (k1 != 0) {
      hess(m + 1, m) = 1.0;
      avnorm = Vector(apply(basis.col(m))).norm();
      ++res.matvecs;
    }

    DenseMatrix f;
    double err_rel = 0.0;
    for (int reject = 0;; ++reject) {
      const Index mx = mb + k1;
      f = dense_expm(t_step * hess.topLeftCorner(mx, mx));
      if (k1 == 0) {
        err_rel = 0.0;
        break;
      }
      const double phi1 = std::abs(f(m, 0));
      const double phi2 = std::abs(f(m + 1, 0) * avnorm);
      if (phi1 > 10.0 * phi2) {
        err_rel = phi2;
        xm = 1.0 / static_cast<double>(m);
      } else if (phi1 > phi2) {
        err_rel = (phi1 * phi2) / (phi1 - phi2);
        xm = 1.0 / static_cast<double>(m);
      } else {
        err_rel = phi1;
        xm = 1.0 / static_cast<double>(std::max<Index>(1, m - 1));
      }
      // f(0,0) scales the step's growth; the estimate is relative to it.
      err_rel /= std::max(std::abs(f.col(0).head(mb).norm()), 1e-300);
      if (err_rel <= delta * t_step * tol) break;
      if (reject == max_reject)
        throw NumericalError(
            fmt::format("Krylov expv rejected {} steps in a row (error estimate {:.3e})",
                        max_reject, err_rel));
      t_step = round2(safety * t_step * std::pow(t_step * tol / err_rel, xm));
    }

    const Index mx = mb + std::max(0, k1 - 1);
    res.w = beta * (basis.leftCols(mx) * f.col(0).head(mx));
    beta = res.w.norm();
    res.error_estimate += err_rel;
    t_now += t_step;
    if (err_rel > 0.0)
      t_new = round2(safety * t_step * std::pow(t_step * tol / err_rel, xm));
    else
      t_new = t_out;
    if (beta == 0.0) break;
  }
  return res;
}

}  // namespace mpx
