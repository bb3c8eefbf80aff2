// Copyright The mnepv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MNEPV_APPS_HPP
#define MNEPV_APPS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mnepv/sampling.hpp"
#include "mnepv/solver.hpp"

namespace mnepv {

// ---------------------------------------------------------------------------
// (Joint) numerical radius
// ---------------------------------------------------------------------------

/// Quartic problem for r(B): A_1 = (B^H + B)/2, A_2 = (i/2)(B^H - B),
/// h_1 = h_2 = identity, so F(x) = |x^H B x|^2 / 2.
Problem numrad_problem(const Matrix& b);

/// Quartic problem F(x) = sum_i (x^H A_i x)^2 / 2.
Problem quartic_problem(std::vector<HermitianMatrix> matrices);

struct RadiusResult {
  /// sqrt(2 F*) of the best converged run, i.e. ||rho(x*)||_2. Solvers
  /// throw ConvergenceError when no run converges.
  double r = 0.0;
  UnitVector x;
  MultistartResult runs;
};

/// Joint numerical radius max ||rho(x)||_2 by multistart SCF. With no
/// explicit starts, `num_starts` supporting-point starts are sampled.
RadiusResult joint_numrad(std::vector<HermitianMatrix> matrices, const SolveOptions& opts,
                          std::span<const UnitVector> starts = {}, std::size_t num_starts = 100,
                          std::uint64_t seed = 0, unsigned jobs = 1);

/// Numerical radius r(B) = max |x^H B x|.
RadiusResult numerical_radius(const Matrix& b, const SolveOptions& opts,
                              std::span<const UnitVector> starts = {},
                              std::size_t num_starts = 100, std::uint64_t seed = 0,
                              unsigned jobs = 1);

// ---------------------------------------------------------------------------
// Partial-symmetric third-order tensors
// ---------------------------------------------------------------------------

/// Zero-based coordinate entry T(i, j, k).
struct TensorEntry {
  Index i = 0;
  Index j = 0;
  Index k = 0;
  double value = 0.0;

  friend bool operator==(const TensorEntry&, const TensorEntry&) = default;
};

/// Real n x n x m tensor with symmetric frontal slices T(:, :, k).
///
/// Duplicate coordinates are summed, then every slice is replaced by
/// (A_k + A_k^T)/2. Entries are stored once per unordered pair i <= j,
/// sorted by (k, j, i).
class TensorPS3 {
 public:
  TensorPS3(Index n, Index m, const std::vector<TensorEntry>& entries);

  Index n() const { return n_; }
  Index m() const { return m_; }

  /// Canonical entries (i <= j), with symmetrized values.
  const std::vector<TensorEntry>& entries() const { return entries_; }
  /// Both (i, j, k) and (j, i, k) for off-diagonal entries.
  std::vector<TensorEntry> expanded_entries() const;

  /// True if the input already satisfied T(i,j,k) = T(j,i,k).
  bool input_was_symmetric() const { return input_symmetric_; }
  bool is_nonnegative() const;

  double value(Index i, Index j, Index k) const;
  RealMatrix slice(Index k) const;
  double frobenius_norm_sq() const;

 private:
  Index n_ = 0;
  Index m_ = 0;
  std::vector<TensorEntry> entries_;
  bool input_symmetric_ = true;
};

/// A_k = T(:, :, k), h_k = identity.
Problem tensor_problem(const TensorPS3& t);

struct RankOneResult {
  double mu = 0.0;
  UnitVector x;
  RealVector z;
  /// lambda_max(H(x)), equal to mu^2 at a solution.
  double lambda = 0.0;
  /// ||T||_F^2 - mu^2.
  double fit = 0.0;
  double objective = 0.0;
  MultistartResult runs;
};

/// Recovers z = rho(x)/||rho(x)||, mu = z^T rho(x) and the fit for a given x.
/// Throws ValidationError when rho(x) = 0.
RankOneResult rank_one_from(const TensorPS3& t, const UnitVector& x);

/// Best rank-one approximation mu x (x) x (x) z by multistart SCF over real
/// vectors. With no explicit starts, `num_starts` vectors |randn(n)| are used
/// (seeded), which keeps every iterate non-negative for non-negative T.
RankOneResult tensor_rank_one(const TensorPS3& t, const SolveOptions& opts,
                              std::span<const UnitVector> starts = {},
                              std::size_t num_starts = 10, std::uint64_t seed = 0,
                              unsigned jobs = 1);

/// `count` seeded vectors |g| / ||g|| with g standard normal in R^n.
std::vector<UnitVector> nonnegative_starts(Index n, std::size_t count, std::uint64_t seed);

/// Alternating maximization over z and x for non-negative T:
///   z_{k+1} = rho(x_k) / ||rho(x_k)||,
///   x_{k+1} = top eigenvector of sum_i z_{k+1}(i) A_i.
/// Returns x_0, x_1, ..., x_{max_iter}. Throws ValidationError when
/// rho(x_k) = 0.
std::vector<RealVector> als_reference(const TensorPS3& t, const RealVector& x0, int max_iter);

// ---------------------------------------------------------------------------
// Distance to singularity of dissipative Hamiltonian DAEs
// ---------------------------------------------------------------------------

/// A_1 = J^2 - sum_i B_i^2 with fn const(1); A_{i+2} = B_i with identity.
/// Requires J = -J^T and every B_i symmetric positive semi-definite.
Problem dhdae_problem(const RealMatrix& j, std::span<const RealMatrix> b);

enum class DhdaeStart {
  /// x0 = top eigenvector of A_1. Guarantees d_est <= delta_M.
  EigA1,
  /// EigA1 plus sampled supporting-point starts; keeps the best.
  Multistart,
};

struct DhdaeOptions {
  DhdaeStart start = DhdaeStart::EigA1;
  std::size_t num_starts = 100;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

struct DhdaeBound {
  /// Upper bound sqrt(-2 F(x*)) on the distance to singularity.
  double d_est = 0.0;
  /// sqrt(-2 lambda_max(A_1)).
  double delta_m = 0.0;
  UnitVector x_star;
  double f_star = 0.0;
  /// F at the EigA1 start vector.
  double f_start = 0.0;
  /// sqrt(-2 F(x0)) for the EigA1 start.
  double d_start = 0.0;
  SolveReport report;
  MultistartResult runs;
};

/// Throws Error if -2 F* < -1e-12 (a negative squared distance).
DhdaeBound dhdae_distance(const RealMatrix& j, std::span<const RealMatrix> b,
                          const SolveOptions& opts = {}, const DhdaeOptions& dopts = {});

}  // namespace mnepv

#endif  // MNEPV_APPS_HPP
