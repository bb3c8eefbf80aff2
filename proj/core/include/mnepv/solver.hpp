// Copyright The mnepv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MNEPV_SOLVER_HPP
#define MNEPV_SOLVER_HPP

#include <limits>
#include <string_view>
#include <vector>

#include "mnepv/linalg.hpp"
#include "mnepv/problem.hpp"

namespace mnepv {

struct SolveOptions {
  /// Convergence threshold on the relative residual.
  double tol = 1e-13;
  /// Residual below which the inverse-iteration step is attempted. 0 gives
  /// plain SCF, +inf attempts it every iteration.
  double tol_acc = 0.1;
  int max_iter = 500;
  /// Keep every iterate in SolveReport::iterates.
  bool record_history = false;
  /// Dense kernels up to this dimension, matrix-free above.
  Index dense_max_n = kDenseMaxN;
  /// Stop when the residual has not dropped by `stagnation_factor` over
  /// `stagnation_window` iterations.
  int stagnation_window = 50;
  double stagnation_factor = 0.999;
};

enum class AccelStatus { NotAttempted, AcceptedIncreasedF, RejectedDecreasedF, SolveFailed };

enum class Termination { Converged, MaxIterations, Stagnated, ZeroOperator, KernelFailure };

std::string_view to_string(AccelStatus s);
std::string_view to_string(Termination t);

/// Outcome of one run. Entry 0 of every history describes the start vector
/// (accel_log[0] is NotAttempted); entry k describes the iterate kept after
/// SCF step k and its optional acceleration.
struct SolveReport {
  UnitVector x_star;
  double lambda_star = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> objective_history;
  /// Residual of the SCF iterate of step k, as tested for convergence.
  std::vector<double> residual_history;
  /// lambda_k = lambda_max(H(x_{k-1})); entry 0 is x0^H H(x0) x0.
  std::vector<double> lambda_history;
  std::vector<AccelStatus> accel_log;
  std::vector<UnitVector> iterates;
  int iterations = 0;
  bool converged = false;
  Termination termination = Termination::MaxIterations;
};

struct ScfStep {
  double lambda = 0.0;
  UnitVector x;
};

/// One SCF step: the top eigenpair of H(x_k). Uses the dense kernel up to
/// `dense_max_n`, warm-started Lanczos above.
ScfStep scf_step(const Problem& problem, const UnitVector& x_k, double inner_tol = 1e-3,
                 Index dense_max_n = kDenseMaxN);

/// Symmetrized Jacobian J_s(x) = H(x) + 2 P M C M^H P with M = [A_1 x, ...],
/// C = diag(h_i'(x^H A_i x)) and P = I - x x^H.
HermitianMatrix jacobian_sym(const Problem& problem, const UnitVector& x);

/// q(x) = 2 P M C M^H x, the rank-one coupling between J_s and the real
/// Jacobian J(x) of x -> H(x/||x||) x: J(x) = J_s(x) + x q(x)^T.
Vector jacobian_coupling(const Problem& problem, const UnitVector& x);

/// Inverse-iteration step normalize((J_s(x_k) - sigma I)^{-1} x_k) with the
/// Rayleigh shift sigma = x_k^H H(x_k) x_k. Throws SingularSystemError when
/// the shifted system cannot be solved.
UnitVector accel_step(const Problem& problem, const UnitVector& x_k, double inner_tol = 1e-3,
                      Index dense_max_n = kDenseMaxN);

/// SCF with optional inverse-iteration acceleration. An accelerated vector
/// replaces the SCF iterate only if it strictly increases F.
SolveReport solve(const Problem& problem, const UnitVector& x0, const SolveOptions& opts = {});

}  // namespace mnepv

#endif  // MNEPV_SOLVER_HPP
