// Copyright The mnepv Authors
// SPDX-License-Identifier: Apache-2.0

#include "mnepv/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include <Eigen/Eigenvalues>

#include "kernels.hpp"
#include "mnepv/errors.hpp"
#include "mnepv/linalg.hpp"
#include "text.hpp"

namespace mnepv {

namespace {

// Asymmetry admitted before symmetrization, relative to ||M||_1.
constexpr double kHermitianSlack = 1e-12;

template <class M>
double norm1_of(const M& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace

// ---------------------------------------------------------------------------
// HermitianMatrix

HermitianMatrix::HermitianMatrix(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionError("Hermitian matrix must be square and non-empty, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (!m.allFinite()) throw ValidationError("matrix has non-finite entries");

  const double scale = norm1_of(m);
  const double asym = norm1_of(Matrix(m - m.adjoint()));
  if (asym > kHermitianSlack * scale) {
    throw ValidationError("matrix is not Hermitian: ||M - M^H||_1 = " + detail::shortest(asym) +
                          ", ||M||_1 = " + detail::shortest(scale));
  }
  data_ = (m + m.adjoint()) * 0.5;
  for (Index i = 0; i < data_.rows(); ++i) data_(i, i) = Complex(data_(i, i).real(), 0.0);

  is_real_ = (data_.imag().array() == 0.0).all();
  if (is_real_) real_ = data_.real();
  norm1_ = norm1_of(data_);
}

HermitianMatrix HermitianMatrix::from_real(const RealMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionError("symmetric matrix must be square and non-empty");
  }
  if (!m.allFinite()) throw ValidationError("matrix has non-finite entries");
  const double scale = norm1_of(m);
  const double asym = norm1_of(RealMatrix(m - m.transpose()));
  if (asym > kHermitianSlack * scale) {
    throw ValidationError("matrix is not symmetric: ||M - M^T||_1 = " + detail::shortest(asym));
  }
  HermitianMatrix out;
  out.real_ = (m + m.transpose()) * 0.5;
  out.data_ = out.real_.cast<Complex>();
  out.is_real_ = true;
  out.norm1_ = norm1_of(out.real_);
  return out;
}

HermitianMatrix HermitianMatrix::zero(Index n) { return from_real(RealMatrix::Zero(n, n)); }

// ---------------------------------------------------------------------------
// MonotoneFn

MonotoneFn MonotoneFn::constant(double c) {
  if (!(c >= 0.0) || !std::isfinite(c)) {
    throw ValidationError("constant coefficient must be finite and >= 0");
  }
  MonotoneFn f;
  f.kind_ = Kind::Constant;
  f.a_ = c;
  return f;
}

MonotoneFn MonotoneFn::identity() {
  MonotoneFn f;
  f.kind_ = Kind::Identity;
  return f;
}

MonotoneFn MonotoneFn::affine(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b) || b < 0.0) {
    throw ValidationError("affine slope must be finite and >= 0");
  }
  MonotoneFn f;
  f.kind_ = Kind::Affine;
  f.a_ = a;
  f.b_ = b;
  return f;
}

MonotoneFn MonotoneFn::custom(Scalar phi, Scalar h, Scalar hprime, std::string name) {
  if (!phi || !h || !hprime) throw ValidationError("custom function triple has an empty member");
  MonotoneFn f;
  f.kind_ = Kind::Custom;
  f.phi_ = std::move(phi);
  f.h_ = std::move(h);
  f.hprime_ = std::move(hprime);
  f.name_ = std::move(name);
  return f;
}

MonotoneFn MonotoneFn::parse(const std::string& spec) {
  if (spec == "id" || spec == "identity") return identity();
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (head == "const") {
    auto c = detail::parse_double(args);
    if (!c) throw ValidationError("bad constant in function spec '" + spec + "'");
    return constant(*c);
  }
  if (head == "affine") {
    const auto comma = args.find(',');
    if (comma == std::string::npos) {
      throw ValidationError("affine spec needs 'affine:a,b', got '" + spec + "'");
    }
    auto a = detail::parse_double(std::string_view(args).substr(0, comma));
    auto b = detail::parse_double(std::string_view(args).substr(comma + 1));
    if (!a || !b) throw ValidationError("bad number in function spec '" + spec + "'");
    return affine(*a, *b);
  }
  throw ValidationError("unknown function spec '" + spec + "' (expected const:c, id, affine:a,b)");
}

double MonotoneFn::phi(double t) const {
  switch (kind_) {
    case Kind::Constant: return a_ * t;
    case Kind::Identity: return 0.5 * t * t;
    case Kind::Affine: return a_ * t + 0.5 * b_ * t * t;
    case Kind::Custom: return phi_(t);
  }
  return 0.0;
}

double MonotoneFn::h(double t) const {
  switch (kind_) {
    case Kind::Constant: return a_;
    case Kind::Identity: return t;
    case Kind::Affine: return a_ + b_ * t;
    case Kind::Custom: return h_(t);
  }
  return 0.0;
}

double MonotoneFn::hprime(double t) const {
  switch (kind_) {
    case Kind::Constant: return 0.0;
    case Kind::Identity: return 1.0;
    case Kind::Affine: return b_;
    case Kind::Custom: return hprime_(t);
  }
  return 0.0;
}

std::string MonotoneFn::describe() const {
  switch (kind_) {
    case Kind::Constant: return "const:" + detail::shortest(a_);
    case Kind::Identity: return "id";
    case Kind::Affine: return "affine:" + detail::shortest(a_) + "," + detail::shortest(b_);
    case Kind::Custom: return name_;
  }
  return {};
}

// ---------------------------------------------------------------------------
// UnitVector

UnitVector::UnitVector(const Vector& v) {
  if (!v.allFinite()) throw ValidationError("vector has non-finite entries");
  const double nrm = v.norm();
  if (v.size() == 0 || nrm == 0.0) throw ValidationError("cannot normalize a zero vector");
  v_ = v / nrm;
  normalize_phase(v_);
}

UnitVector UnitVector::from_real(const RealVector& v) { return UnitVector(v.cast<Complex>()); }

UnitVector UnitVector::basis(Index n, Index k) {
  if (k < 0 || k >= n) throw DimensionError("basis index out of range");
  Vector e = Vector::Zero(n);
  e(k) = 1.0;
  return UnitVector(e);
}

bool UnitVector::is_real() const { return detail::is_real_vector(v_); }

// ---------------------------------------------------------------------------
// Problem

Problem::Problem(std::vector<HermitianMatrix> matrices, std::vector<MonotoneFn> fns)
    : matrices_(std::move(matrices)), fns_(std::move(fns)) {
  if (matrices_.empty()) throw DimensionError("problem needs at least one matrix");
  if (matrices_.size() != fns_.size()) {
    throw DimensionError("got " + std::to_string(matrices_.size()) + " matrices but " +
                         std::to_string(fns_.size()) + " functions");
  }
  n_ = matrices_.front().n();
  for (const auto& a : matrices_) {
    if (a.n() != n_) throw DimensionError("coefficient matrices differ in dimension");
    is_real_ = is_real_ && a.is_real();
  }

  // Sampled monotonicity of custom functions over the range of x^H A_i x.
  constexpr int kSamples = 129;
  for (std::size_t i = 0; i < fns_.size(); ++i) {
    if (fns_[i].kind() != MonotoneFn::Kind::Custom) continue;
    const RealVector ev = eigvals(matrices_[i]);
    const double lo = ev(ev.size() - 1);
    const double hi = ev(0);
    for (int s = 0; s < kSamples; ++s) {
      const double t = lo + (hi - lo) * s / (kSamples - 1);
      const double d = fns_[i].hprime(t);
      if (!(d >= 0.0)) {
        throw ValidationError("function " + std::to_string(i) + " (" + fns_[i].describe() +
                              ") has h'(" + detail::shortest(t) + ") = " + detail::shortest(d) +
                              " < 0");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Kernels

namespace detail {

bool is_real_vector(const Vector& x) { return (x.imag().array() == 0.0).all(); }

Vector apply(const HermitianMatrix& a, const Vector& x) {
  if (!a.is_real()) return a.data() * x;
  const RealMatrix& r = a.real_data();
  if (is_real_vector(x)) return (r * x.real()).cast<Complex>();
  Vector out(x.size());
  out.real() = r * x.real();
  out.imag() = r * x.imag();
  return out;
}

HermitianMatrix combine(const Problem& problem, const RealVector& coeffs) {
  const Index n = problem.n();
  if (problem.is_real()) {
    RealMatrix acc = RealMatrix::Zero(n, n);
    for (Index i = 0; i < problem.m(); ++i) {
      if (coeffs(i) != 0.0) acc.noalias() += coeffs(i) * problem.matrix(i).real_data();
    }
    return HermitianMatrix::from_real(acc);
  }
  Matrix acc = Matrix::Zero(n, n);
  for (Index i = 0; i < problem.m(); ++i) {
    if (coeffs(i) != 0.0) acc.noalias() += coeffs(i) * problem.matrix(i).data();
  }
  return HermitianMatrix(acc);
}

void check_size(const Problem& problem, Index size, const char* what) {
  if (size != problem.n()) {
    throw DimensionError(std::string(what) + " has length " + std::to_string(size) +
                         ", problem dimension is " + std::to_string(problem.n()));
  }
}

Evaluation evaluate(const Problem& problem, const UnitVector& x) {
  check_size(problem, x.size(), "vector");
  const Index m = problem.m();
  Evaluation ev;
  ev.ax.reserve(static_cast<std::size_t>(m));
  ev.rho.resize(m);
  RealVector coeffs(m);
  for (Index i = 0; i < m; ++i) {
    ev.ax.push_back(apply(problem.matrix(i), x.vec()));
    const double t = x.vec().dot(ev.ax.back()).real();
    ev.rho(i) = t;
    ev.objective += problem.fn(i).phi(t);
    coeffs(i) = problem.fn(i).h(t);
  }
  ev.h = combine(problem, coeffs);
  ev.hx = Vector::Zero(x.size());
  for (Index i = 0; i < m; ++i) {
    if (coeffs(i) != 0.0) ev.hx += coeffs(i) * ev.ax[static_cast<std::size_t>(i)];
  }
  ev.rayleigh = x.vec().dot(ev.hx).real();
  const double hnorm = ev.h.norm1();
  ev.residual = hnorm == 0.0 ? std::numeric_limits<double>::infinity()
                             : (ev.hx - ev.rayleigh * x.vec()).norm() / hnorm;
  return ev;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Pointwise formulas

RealVector rho_map(const Problem& problem, const UnitVector& x) {
  detail::check_size(problem, x.size(), "vector");
  RealVector out(problem.m());
  for (Index i = 0; i < problem.m(); ++i) {
    out(i) = x.vec().dot(detail::apply(problem.matrix(i), x.vec())).real();
  }
  return out;
}

HermitianMatrix assemble_h(const Problem& problem, const UnitVector& x) {
  const RealVector rho = rho_map(problem, x);
  RealVector coeffs(problem.m());
  for (Index i = 0; i < problem.m(); ++i) coeffs(i) = problem.fn(i).h(rho(i));
  return detail::combine(problem, coeffs);
}

double objective(const Problem& problem, const UnitVector& x) {
  const RealVector rho = rho_map(problem, x);
  double f = 0.0;
  for (Index i = 0; i < problem.m(); ++i) f += problem.fn(i).phi(rho(i));
  return f;
}

double residual(const Problem& problem, const UnitVector& x) {
  return detail::evaluate(problem, x).residual;
}

HermitianMatrix dh_directional(const Problem& problem, const UnitVector& x, const Vector& d) {
  detail::check_size(problem, x.size(), "vector");
  detail::check_size(problem, d.size(), "direction");
  RealVector coeffs(problem.m());
  for (Index i = 0; i < problem.m(); ++i) {
    const Vector ax = detail::apply(problem.matrix(i), x.vec());
    const double t = x.vec().dot(ax).real();
    const double hp = problem.fn(i).hprime(t);
    // x^H A_i d = conj(d^H A_i x); the real parts agree.
    coeffs(i) = hp == 0.0 ? 0.0 : 2.0 * d.dot(ax).real() * hp;
  }
  return detail::combine(problem, coeffs);
}

double characteristic_quadratic(const Problem& problem, const UnitVector& x_star, const Vector& d) {
  detail::check_size(problem, d.size(), "direction");
  const detail::Evaluation ev = detail::evaluate(problem, x_star);
  double value = d.dot(detail::apply(ev.h, d)).real() - ev.rayleigh * d.squaredNorm();
  for (Index i = 0; i < problem.m(); ++i) {
    const double hp = problem.fn(i).hprime(ev.rho(i));
    if (hp == 0.0) continue;
    const double re = d.dot(ev.ax[static_cast<std::size_t>(i)]).real();
    value += 2.0 * hp * re * re;
  }
  return value;
}

}  // namespace mnepv
