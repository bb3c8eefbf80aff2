// Copyright The mnepv Authors
// SPDX-License-Identifier: Apache-2.0

#include "mnepv/stability.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "kernels.hpp"
#include "mnepv/errors.hpp"
#include "mnepv/linalg.hpp"
#include "text.hpp"

namespace mnepv {

namespace {

// x* must sit in the top eigenspace to this accuracy, relative to ||H||_1.
constexpr double kTopSlack = 1e-8;

}  // namespace

std::string_view to_string(Stability s) {
  switch (s) {
    case Stability::Stable: return "stable";
    case Stability::WeaklyStable: return "weakly_stable";
    case Stability::NonStable: return "non_stable";
    case Stability::Indeterminate: return "indeterminate";
  }
  return "unknown";
}

LinearizedScfMap::LinearizedScfMap(const Problem& problem, const UnitVector& x_star) {
  const detail::Evaluation ev = detail::evaluate(problem, x_star);
  h_norm1_ = ev.h.norm1();
  const EigDecomposition eig = eig_full(ev.h);
  const Index n = problem.n();

  Index top = 0;
  double overlap = -1.0;
  for (Index j = 0; j < n; ++j) {
    const double a = std::abs(eig.vectors.col(j).dot(x_star.vec()));
    if (a > overlap) {
      overlap = a;
      top = j;
    }
  }
  if (eig.values(0) - eig.values(top) > kTopSlack * h_norm1_) {
    throw ValidationError("x* is not a top eigenvector of H(x*): aligned with eigenvalue " +
                          detail::shortest(eig.values(top)) + ", largest is " +
                          detail::shortest(eig.values(0)));
  }
  lambda_star_ = eig.values(top);

  complement_.resize(n, n - 1);
  weights_.resize(n - 1);
  for (Index j = 0, c = 0; j < n; ++j) {
    if (j == top) continue;
    complement_.col(c) = eig.vectors.col(j);
    weights_(c) = lambda_star_ - eig.values(j);
    ++c;
  }
  eigengap_ = n == 1 ? std::numeric_limits<double>::infinity() : weights_.minCoeff();

  const Index m = problem.m();
  coupling_.resize(n - 1, m);
  hprime_.resize(m);
  for (Index i = 0; i < m; ++i) {
    coupling_.col(i) = complement_.adjoint() * ev.ax[static_cast<std::size_t>(i)];
    hprime_(i) = problem.fn(i).hprime(ev.rho(i));
  }
}

Vector LinearizedScfMap::apply(const Vector& z) const {
  if (z.size() != dim()) throw DimensionError("vector length does not match the complement");
  Vector out = Vector::Zero(dim());
  for (Index i = 0; i < hprime_.size(); ++i) {
    if (hprime_(i) == 0.0) continue;
    out += (2.0 * hprime_(i) * coupling_.col(i).dot(z).real()) * coupling_.col(i);
  }
  return out.cwiseQuotient(weights_.cast<Complex>());
}

double LinearizedScfMap::inner(const Vector& y, const Vector& z) const {
  if (y.size() != dim() || z.size() != dim()) {
    throw DimensionError("vector length does not match the complement");
  }
  return y.dot(weights_.cast<Complex>().cwiseProduct(z)).real();
}

double LinearizedScfMap::spectral_radius() const {
  if (dim() == 0) return 0.0;
  if (!(weights_.minCoeff() > 0.0)) return std::numeric_limits<double>::infinity();
  const Index m = hprime_.size();
  RealMatrix k(m, m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j <= i; ++j) {
      Complex acc = 0.0;
      for (Index l = 0; l < dim(); ++l) {
        acc += std::conj(coupling_(l, i)) * coupling_(l, j) / weights_(l);
      }
      k(i, j) = k(j, i) = 2.0 * std::sqrt(hprime_(i) * hprime_(j)) * acc.real();
    }
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(k, Eigen::EigenvaluesOnly);
  return std::max(0.0, es.eigenvalues()(m - 1));
}

double LinearizedScfMap::max_characteristic_quadratic() const {
  const Index d = dim();
  if (d == 0) return -std::numeric_limits<double>::infinity();
  // d = X z with z = u + i w realified as [u; w].
  RealMatrix q = RealMatrix::Zero(2 * d, 2 * d);
  q.diagonal().head(d) = -weights_;
  q.diagonal().tail(d) = -weights_;
  for (Index i = 0; i < hprime_.size(); ++i) {
    if (hprime_(i) == 0.0) continue;
    RealVector r(2 * d);
    r.head(d) = coupling_.col(i).real();
    r.tail(d) = coupling_.col(i).imag();
    q.noalias() += 2.0 * hprime_(i) * r * r.transpose();
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(q, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(2 * d - 1);
}

StabilityReport analyze_stability(const Problem& problem, const UnitVector& x_star,
                                  const StabilityTolerances& tol) {
  const LinearizedScfMap map(problem, x_star);
  StabilityReport report;
  report.lambda_star = map.lambda_star();
  report.eigengap = map.eigengap();
  report.rho_L = map.spectral_radius();
  if (!(report.eigengap > tol.gap_rel * map.h_norm1())) {
    report.classification = Stability::Indeterminate;
    report.phi_max = map.max_characteristic_quadratic();
    return report;
  }
  if (report.rho_L < 1.0 - tol.stab) {
    report.classification = Stability::Stable;
  } else if (report.rho_L > 1.0 + tol.stab) {
    report.classification = Stability::NonStable;
  } else {
    report.classification = Stability::WeaklyStable;
  }
  return report;
}

}  // namespace mnepv
