// Copyright The mnepv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MNEPV_SAMPLING_HPP
#define MNEPV_SAMPLING_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mnepv/solver.hpp"

namespace mnepv {

/// Supporting point of the joint numerical range W(A) for outer normal v:
/// y_v = rho(x_v) maximizes v^T y over W(A), with x_v a top eigenvector of
/// H_v = sum_i v(i) A_i and lambda_v = v^T y_v.
struct SupportingPoint {
  RealVector v;
  double lambda_v = 0.0;
  UnitVector x_v;
  RealVector y_v;
};

/// Deterministic set of `count` unit directions in R^m.
///
///   m = 1: alternating +1, -1.
///   m = 2: theta_j = 2 pi j / count, v = (cos theta, sin theta).
///   m = 3: spherical (eta, theta) grid with n_eta = max(1, round(sqrt(count/2)))
///          rows, eta_i = pi (i + 1/2) / n_eta, theta_j = 2 pi j / n_theta,
///          n_theta = ceil(count / n_eta); the first `count` points in
///          row-major order.
///   m >= 4: Rng(seed).unit_vector(m), drawn in sequence.
std::vector<RealVector> direction_grid(Index m, std::size_t count, std::uint64_t seed = 0);

/// Explicit spherical grid: n_eta x n_theta points, row-major in eta.
std::vector<RealVector> spherical_grid(std::size_t n_eta, std::size_t n_theta);

/// One supporting point per direction. With the dense kernel, a direction
/// that is the exact negation (to 1e-14) of an earlier one reuses that
/// decomposition's bottom eigenpair. Throws ValidationError on a zero
/// direction.
std::vector<SupportingPoint> supporting_points(const Problem& problem,
                                               std::span<const RealVector> directions,
                                               double inner_tol = 1e-12,
                                               Index dense_max_n = kDenseMaxN);

/// x_v for each direction of direction_grid(m, count, seed).
std::vector<UnitVector> supporting_starts(const Problem& problem, std::size_t count,
                                          std::uint64_t seed = 0,
                                          Index dense_max_n = kDenseMaxN);

/// Greedy initial vector: the sampled x_v with the largest objective.
UnitVector greedy_init(const Problem& problem, std::size_t num_samples, std::uint64_t seed = 0,
                       Index dense_max_n = kDenseMaxN);

struct Cluster {
  /// Objective of the representative (the run with the largest F).
  double objective = 0.0;
  std::size_t count = 0;
  std::size_t representative = 0;
  std::vector<std::size_t> members;
};

struct MultistartResult {
  std::vector<SolveReport> reports;
  /// Clusters of converged runs, ordered by decreasing objective.
  std::vector<Cluster> clusters;
  /// Index of the converged run with the largest objective, if any.
  std::optional<std::size_t> best;
};

inline constexpr double kClusterGap = 1e-6;

/// Groups converged runs by objective value: sorted descending, a new cluster
/// starts wherever consecutive values differ by more than `gap`.
std::vector<Cluster> cluster_objectives(std::span<const SolveReport> reports,
                                        double gap = kClusterGap);

/// Runs solve() from every start. `jobs` > 1 runs starts on worker threads;
/// results are independent of `jobs`.
MultistartResult multistart(const Problem& problem, std::span<const UnitVector> starts,
                            const SolveOptions& opts = {}, unsigned jobs = 1);

}  // namespace mnepv

#endif  // MNEPV_SAMPLING_HPP
