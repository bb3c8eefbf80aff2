// Copyright The mnepv Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>

#include "mnepv/errors.hpp"
#include "mnepv/linalg.hpp"

namespace mnepv {

Vector solve_shifted(const LinearOperator& op, double sigma, const Vector& b, double inner_tol,
                     const MinresOptions& opts) {
  const Index n = op.n;
  if (b.size() != n) throw DimensionError("right-hand side length mismatch");
  const int max_iter = opts.max_iter > 0 ? opts.max_iter : static_cast<int>(4 * n);
  const double eps = std::numeric_limits<double>::epsilon();
  const double tol = std::max(inner_tol, eps);
  Vector x = Vector::Zero(n);
  const double beta1 = b.norm();
  if (beta1 == 0.0) return x;

  // Paige-Saunders recurrences; Lanczos coefficients are real for a
  // Hermitian operator.
  Vector r1 = b;
  Vector r2 = b;
  Vector y = b;
  Vector w = Vector::Zero(n);
  Vector w1 = Vector::Zero(n);
  Vector w2 = Vector::Zero(n);
  double beta = beta1;
  double oldb = 0.0;
  double dbar = 0.0;
  double epsln = 0.0;
  double phibar = beta1;
  double cs = -1.0;
  double sn = 0.0;

  for (int itn = 1; itn <= max_iter; ++itn) {
    const Vector v = y / beta;
    y = op.apply(v) - sigma * v;
    if (itn >= 2) y -= (beta / oldb) * r1;
    const double alfa = v.dot(y).real();
    y -= (alfa / beta) * r2;
    r1 = r2;
    r2 = y;
    oldb = beta;
    beta = y.norm();

    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;

    const double gamma = std::hypot(gbar, beta);
    if (gamma == 0.0) {
      throw SingularSystemError("MINRES breakdown on a singular shifted operator");
    }
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;

    w1 = w2;
    w2 = w;
    w = (v - oldeps * w1 - delta * w2) / gamma;
    x += phi * w;

    if (!x.allFinite()) throw SingularSystemError("MINRES produced a non-finite iterate");
    if (phibar <= tol * beta1 || beta == 0.0) break;
  }

  // The recurrence residual can drift from the true one.
  const double true_res = (op.apply(x) - sigma * x - b).norm();
  if (!(true_res <= std::max(tol, 1e3 * eps) * beta1 * 10.0)) {
    throw SingularSystemError("MINRES did not reach the requested accuracy");
  }
  return x;
}

}  // namespace mnepv
