// Copyright The mnepv Authors
// SPDX-License-Identifier: Apache-2.0

#include "mnepv/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "kernels.hpp"
#include "mnepv/errors.hpp"
#include "mnepv/rng.hpp"

namespace mnepv {

void normalize_phase(Eigen::Ref<Vector> v) {
  Index k = -1;
  double best = 0.0;
  for (Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a > best) {
      best = a;
      k = i;
    }
  }
  if (k < 0) return;
  const Complex rot = std::conj(v(k)) / best;
  v *= rot;
  v(k) = Complex(std::abs(v(k)), 0.0);
}

namespace {

bool lex_less(const Vector& a, const Vector& b) {
  for (Index i = 0; i < a.size(); ++i) {
    if (a(i).real() != b(i).real()) return a(i).real() < b(i).real();
    if (a(i).imag() != b(i).imag()) return a(i).imag() < b(i).imag();
  }
  return false;
}

// Eigen returns ascending values; reorder descending and break exact ties.
EigDecomposition finish(const RealVector& asc, Matrix vecs) {
  const Index n = asc.size();
  for (Index j = 0; j < n; ++j) normalize_phase(vecs.col(j));
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (asc(a) != asc(b)) return asc(a) > asc(b);
    return lex_less(vecs.col(a), vecs.col(b));
  });
  EigDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Index j = 0; j < n; ++j) {
    const Index src = order[static_cast<std::size_t>(j)];
    out.values(j) = asc(src);
    out.vectors.col(j) = vecs.col(src);
  }
  return out;
}

}  // namespace

EigDecomposition eig_full(const HermitianMatrix& h) {
  if (h.is_real()) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(h.real_data());
    if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", 0.0, 0.0);
    return finish(es.eigenvalues(), es.eigenvectors().cast<Complex>());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.data());
  if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", 0.0, 0.0);
  return finish(es.eigenvalues(), es.eigenvectors());
}

RealVector eigvals(const HermitianMatrix& h) {
  RealVector asc;
  if (h.is_real()) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(h.real_data(), Eigen::EigenvaluesOnly);
    asc = es.eigenvalues();
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.data(), Eigen::EigenvaluesOnly);
    asc = es.eigenvalues();
  }
  return asc.reverse();
}

EigPair largest_eigpair(const HermitianMatrix& h, double /*inner_tol*/) {
  const EigDecomposition d = eig_full(h);
  return {d.values(0), UnitVector(Vector(d.vectors.col(0)))};
}

Vector solve_shifted(const HermitianMatrix& m, double sigma, const Vector& b) {
  if (b.size() != m.n()) throw DimensionError("right-hand side length mismatch");
  // Inverse iteration wants shifts close to an eigenvalue, so only a
  // condition estimate far below eps counts as singular.
  const double eps = std::numeric_limits<double>::epsilon();
  Vector w;
  double rcond = 0.0;
  if (m.is_real()) {
    RealMatrix a = m.real_data();
    a.diagonal().array() -= sigma;
    Eigen::PartialPivLU<RealMatrix> lu(a);
    rcond = lu.rcond();
    if (detail::is_real_vector(b)) {
      w = lu.solve(b.real()).cast<Complex>();
    } else {
      w.resize(b.size());
      w.real() = lu.solve(b.real());
      w.imag() = lu.solve(b.imag());
    }
  } else {
    Matrix a = m.data();
    a.diagonal().array() -= sigma;
    Eigen::PartialPivLU<Matrix> lu(a);
    rcond = lu.rcond();
    w = lu.solve(b);
  }
  if (!(rcond >= eps * eps) || !w.allFinite()) {
    throw SingularSystemError("shifted system is numerically singular (rcond " +
                              std::to_string(rcond) + ")");
  }
  return w;
}

LinearOperator as_operator(const HermitianMatrix& m) {
  return {m.n(), [m](const Vector& v) { return detail::apply(m, v); }};
}

bool probe_hermitian(const LinearOperator& op, int probes, double tol, std::uint64_t seed) {
  Rng rng(seed);
  for (int p = 0; p < probes; ++p) {
    Vector u(op.n);
    Vector v(op.n);
    u.real() = rng.normal_vector(op.n);
    u.imag() = rng.normal_vector(op.n);
    v.real() = rng.normal_vector(op.n);
    v.imag() = rng.normal_vector(op.n);
    const Vector mu = op.apply(u);
    const Vector mv = op.apply(v);
    const Complex lhs = u.dot(mv);
    const Complex rhs = std::conj(v.dot(mu));
    const double scale = std::max({mu.norm() * v.norm(), mv.norm() * u.norm(), 1e-300});
    if (std::abs(lhs - rhs) > tol * scale) return false;
  }
  return true;
}

}  // namespace mnepv
