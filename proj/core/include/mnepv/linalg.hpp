// Copyright The mnepv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MNEPV_LINALG_HPP
#define MNEPV_LINALG_HPP

#include <cstdint>
#include <functional>
#include <optional>

#include "mnepv/problem.hpp"

namespace mnepv {

/// Above this dimension the solver switches to matrix-free kernels.
inline constexpr Index kDenseMaxN = 2000;

/// Full spectrum of a Hermitian matrix, values descending. Column i of
/// `vectors` pairs with values(i) and is phase-normalized.
struct EigDecomposition {
  RealVector values;
  Matrix vectors;
};

/// Action of a Hermitian operator, v -> M v.
struct LinearOperator {
  Index n = 0;
  std::function<Vector(const Vector&)> apply;
};

struct EigPair {
  double value = 0.0;
  UnitVector vector;
};

/// Dense decomposition. Equal eigenvalues are ordered lexicographically on
/// the phase-normalized vectors, so the output is deterministic.
EigDecomposition eig_full(const HermitianMatrix& h);

/// Eigenvalues only, descending.
RealVector eigvals(const HermitianMatrix& h);

/// Largest eigenpair of a dense matrix (by full decomposition).
EigPair largest_eigpair(const HermitianMatrix& h, double inner_tol = 0.0);

struct LanczosOptions {
  Index krylov_dim = 40;
  int max_restarts = 500;
};

/// Largest eigenpair of a matrix-free operator by explicitly restarted
/// Lanczos with full reorthogonalization. Stops when
/// ||M v - theta v|| <= inner_tol * max|Ritz|. Throws ConvergenceError after
/// `max_restarts` restarts.
EigPair largest_eigpair(const LinearOperator& op, double inner_tol,
                        const std::optional<Vector>& start = std::nullopt,
                        const LanczosOptions& opts = {});

/// Solves (M - sigma I) w = b by LU with partial pivoting. Throws
/// SingularSystemError when the reciprocal condition estimate drops below
/// eps^2 or the solution is not finite.
Vector solve_shifted(const HermitianMatrix& m, double sigma, const Vector& b);

struct MinresOptions {
  int max_iter = 0;  // 0 selects 4 n
};

/// Solves (M - sigma I) w = b by MINRES to ||(M - sigma I) w - b|| <=
/// inner_tol ||b||. Throws SingularSystemError on breakdown or when the
/// tolerance is not met within the iteration limit.
Vector solve_shifted(const LinearOperator& op, double sigma, const Vector& b, double inner_tol,
                     const MinresOptions& opts = {});

/// Wraps a dense matrix as an operator.
LinearOperator as_operator(const HermitianMatrix& m);

/// Checks <u, M v> = conj(<v, M u>) on `probes` seeded random pairs to
/// relative accuracy `tol`.
bool probe_hermitian(const LinearOperator& op, int probes = 4, double tol = 1e-10,
                     std::uint64_t seed = 0);

/// Rotates v so its largest-modulus entry (lowest index on ties) is real
/// and non-negative.
void normalize_phase(Eigen::Ref<Vector> v);

}  // namespace mnepv

#endif  // MNEPV_LINALG_HPP
