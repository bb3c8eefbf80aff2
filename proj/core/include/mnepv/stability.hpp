// Copyright The mnepv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MNEPV_STABILITY_HPP
#define MNEPV_STABILITY_HPP

#include <optional>
#include <string_view>

#include "mnepv/problem.hpp"

namespace mnepv {

enum class Stability { Stable, WeaklyStable, NonStable, Indeterminate };

std::string_view to_string(Stability s);

struct StabilityTolerances {
  /// Half-width of the band around 1 classified as weakly stable.
  double stab = 1e-8;
  /// Eigengap threshold relative to ||H(x*)||_1.
  double gap_rel = 1e-10;
};

struct StabilityReport {
  /// Spectral radius of the linearized SCF map.
  double rho_L = 0.0;
  Stability classification = Stability::Indeterminate;
  /// lambda_1(H(x*)) - lambda_2(H(x*)); +inf when n == 1.
  double eigengap = 0.0;
  double lambda_star = 0.0;
  /// Max of the characteristic quadratic over unit d orthogonal to x*.
  /// Only filled for Indeterminate reports (non-simple lambda*).
  std::optional<double> phi_max;

  friend bool operator==(const StabilityReport&, const StabilityReport&) = default;
};

/// The R-linear operator governing local SCF contraction at x*,
///
///   L(z) = 2 D^{-1} sum_i Re(x*^H A_i X z) h_i'(x*^H A_i x*) X^H A_i x*,
///
/// on C^{n-1}, where [x*, X] diagonalizes H(x*) and D = lambda* I - Lambda_X.
/// Self-adjoint and positive semi-definite in <y, z>_D = Re(y^H D z) whenever
/// lambda* is a simple largest eigenvalue.
class LinearizedScfMap {
 public:
  /// Throws ValidationError if x* is not aligned with the top eigenvector of
  /// H(x*).
  LinearizedScfMap(const Problem& problem, const UnitVector& x_star);

  Index dim() const { return weights_.size(); }
  Vector apply(const Vector& z) const;
  /// Re(y^H D z).
  double inner(const Vector& y, const Vector& z) const;

  /// Diagonal of D.
  const RealVector& weights() const { return weights_; }
  double lambda_star() const { return lambda_star_; }
  double eigengap() const { return eigengap_; }
  double h_norm1() const { return h_norm1_; }

  /// lambda_max(L) through the m x m reduction B^T Dhat^{-1} B. Requires a
  /// positive eigengap; returns +inf otherwise.
  double spectral_radius() const;

  /// max over unit d with d^H x* = 0 of the characteristic quadratic,
  /// computed on the realified complement (a 2(n-1) symmetric eigenproblem).
  double max_characteristic_quadratic() const;

 private:
  RealVector weights_;
  Matrix complement_;   // X, n x (n-1)
  Matrix coupling_;     // column i is X^H A_i x*, (n-1) x m
  RealVector hprime_;   // h_i'(x*^H A_i x*)
  double lambda_star_ = 0.0;
  double eigengap_ = 0.0;
  double h_norm1_ = 0.0;
};

/// Classifies x* as Stable (rho_L < 1 - tol), NonStable (rho_L > 1 + tol),
/// WeaklyStable (in between) or Indeterminate (eigengap <= gap_rel*||H||_1).
StabilityReport analyze_stability(const Problem& problem, const UnitVector& x_star,
                                  const StabilityTolerances& tol = {});

}  // namespace mnepv

#endif  // MNEPV_STABILITY_HPP
