// Copyright The mnepv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MNEPV_SRC_KERNELS_HPP
#define MNEPV_SRC_KERNELS_HPP

#include <vector>

#include "mnepv/linalg.hpp"
#include "mnepv/problem.hpp"

namespace mnepv::detail {

bool is_real_vector(const Vector& x);

/// a * x, using real arithmetic where a (and x) allow it.
Vector apply(const HermitianMatrix& a, const Vector& x);

/// sum_i c(i) A_i.
HermitianMatrix combine(const Problem& problem, const RealVector& coeffs);

/// Everything derived from one vector: A_i x, rho(x), F(x), H(x), H(x) x.
struct Evaluation {
  std::vector<Vector> ax;
  RealVector rho;
  double objective = 0.0;
  HermitianMatrix h;
  Vector hx;
  /// x^H H(x) x.
  double rayleigh = 0.0;
  double residual = 0.0;
};

Evaluation evaluate(const Problem& problem, const UnitVector& x);

/// Top eigenpair: full decomposition up to dense_max_n, Lanczos warm-started
/// from `warm` above.
EigPair top_eigpair(const HermitianMatrix& h, const Vector& warm, double inner_tol,
                    Index dense_max_n);

void check_size(const Problem& problem, Index size, const char* what);

}  // namespace mnepv::detail

#endif  // MNEPV_SRC_KERNELS_HPP
