// Copyright The mnepv Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "mnepv/errors.hpp"
#include "mnepv/linalg.hpp"
#include "mnepv/rng.hpp"

namespace mnepv {

EigPair largest_eigpair(const LinearOperator& op, double inner_tol, const std::optional<Vector>& start,
                        const LanczosOptions& opts) {
  const Index n = op.n;
  if (n <= 0) throw DimensionError("operator has dimension 0");
  const double eps = std::numeric_limits<double>::epsilon();
  const double tol = std::max(inner_tol, 64.0 * eps);
  const Index kmax = std::clamp<Index>(opts.krylov_dim, 1, n);

  Vector q;
  if (start && start->size() == n && start->norm() > 0.0) {
    q = *start / start->norm();
  } else {
    Rng rng(0);
    q = rng.unit_vector(n).cast<Complex>();
  }

  double best_theta = -std::numeric_limits<double>::infinity();
  double best_res = std::numeric_limits<double>::infinity();

  for (int restart = 0; restart <= opts.max_restarts; ++restart) {
    Matrix v(n, kmax);
    RealVector alpha(kmax);
    RealVector beta(kmax);
    v.col(0) = q;
    Index k = 0;
    for (; k < kmax; ++k) {
      Vector w = op.apply(v.col(k));
      alpha(k) = v.col(k).dot(w).real();
      // Full reorthogonalization, applied twice.
      for (int pass = 0; pass < 2; ++pass) {
        const Vector c = v.leftCols(k + 1).adjoint() * w;
        w.noalias() -= v.leftCols(k + 1) * c;
      }
      beta(k) = w.norm();
      if (k + 1 == kmax) break;
      const double scale = std::max(std::abs(alpha(k)), beta(k));
      if (beta(k) <= 1e3 * eps * std::max(scale, 1e-300)) break;
      v.col(k + 1) = w / beta(k);
    }
    const Index dim = std::min<Index>(k + 1, kmax);

    RealMatrix t = RealMatrix::Zero(dim, dim);
    for (Index i = 0; i < dim; ++i) {
      t(i, i) = alpha(i);
      if (i + 1 < dim) t(i, i + 1) = t(i + 1, i) = beta(i);
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(t);
    const double theta = es.eigenvalues()(dim - 1);
    const double ritz_scale =
        std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(dim - 1)));
    Vector x = v.leftCols(dim) * es.eigenvectors().col(dim - 1).cast<Complex>();
    x /= x.norm();

    const double res = (op.apply(x) - theta * x).norm();
    if (res < best_res) {
      best_res = res;
      best_theta = theta;
    }
    if (res <= tol * std::max(ritz_scale, 1e-300) || ritz_scale == 0.0) {
      return {theta, UnitVector(x)};
    }
    q = x;
  }
  throw ConvergenceError("Lanczos did not reach the requested accuracy", best_theta, best_res);
}

}  // namespace mnepv
