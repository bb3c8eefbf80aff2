// Copyright The mnepv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MNEPV_PROBLEM_HPP
#define MNEPV_PROBLEM_HPP

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace mnepv {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Dense Hermitian matrix.
///
/// Construction symmetrizes the input as (M + M^H)/2 after checking that the
/// asymmetry is at roundoff level (at most 1e-12 * ||M||_1). Diagonal
/// imaginary parts are dropped, so the stored matrix is exactly Hermitian.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const Matrix& m);

  static HermitianMatrix from_real(const RealMatrix& m);
  static HermitianMatrix zero(Index n);

  Index n() const { return data_.rows(); }
  const Matrix& data() const { return data_; }
  Complex operator()(Index i, Index j) const { return data_(i, j); }

  /// True when every imaginary part is exactly zero.
  bool is_real() const { return is_real_; }

  /// Maximum absolute column sum.
  double norm1() const { return norm1_; }

  RealMatrix real_part() const { return data_.real(); }

  /// Real symmetric copy; empty unless is_real().
  const RealMatrix& real_data() const { return real_; }

 private:
  Matrix data_;
  RealMatrix real_;
  bool is_real_ = true;
  double norm1_ = 0.0;
};

/// Scalar triple (phi, h = phi', h') with h non-decreasing.
class MonotoneFn {
 public:
  enum class Kind { Constant, Identity, Affine, Custom };

  using Scalar = std::function<double(double)>;

  /// h(t) = c with c >= 0.
  static MonotoneFn constant(double c);
  /// h(t) = t.
  static MonotoneFn identity();
  /// h(t) = a + b t with b >= 0.
  static MonotoneFn affine(double a, double b);
  /// User-supplied triple. Monotonicity is sampled when a Problem is built.
  static MonotoneFn custom(Scalar phi, Scalar h, Scalar hprime, std::string name = "custom");

  /// Parses "const:c", "id", "affine:a,b".
  static MonotoneFn parse(const std::string& spec);

  Kind kind() const { return kind_; }
  double phi(double t) const;
  double h(double t) const;
  double hprime(double t) const;

  /// Round-trippable spec string ("const:1", "id", "affine:0.5,2") or the
  /// custom name.
  std::string describe() const;

 private:
  MonotoneFn() = default;

  Kind kind_ = Kind::Identity;
  double a_ = 0.0;
  double b_ = 0.0;
  Scalar phi_;
  Scalar h_;
  Scalar hprime_;
  std::string name_;
};

/// Unit vector in C^n in canonical phase: the entry of largest modulus
/// (lowest index on ties) is real and non-negative.
class UnitVector {
 public:
  UnitVector() = default;
  /// Normalizes and phase-normalizes `v`. Throws on zero or non-finite input.
  explicit UnitVector(const Vector& v);

  static UnitVector from_real(const RealVector& v);
  static UnitVector basis(Index n, Index k);

  const Vector& vec() const { return v_; }
  Index size() const { return v_.size(); }
  Complex operator[](Index i) const { return v_(i); }
  bool is_real() const;

 private:
  Vector v_;
};

/// Monotone NEPv H(x) x = lambda x with H(x) = sum_i h_i(x^H A_i x) A_i and
/// lambda the largest eigenvalue of H(x).
class Problem {
 public:
  /// Checks sizes and, for Custom functions, samples h_i' >= 0 on
  /// [lambda_min(A_i), lambda_max(A_i)].
  Problem(std::vector<HermitianMatrix> matrices, std::vector<MonotoneFn> fns);

  Index n() const { return n_; }
  Index m() const { return static_cast<Index>(matrices_.size()); }

  const HermitianMatrix& matrix(Index i) const { return matrices_[static_cast<std::size_t>(i)]; }
  const MonotoneFn& fn(Index i) const { return fns_[static_cast<std::size_t>(i)]; }
  const std::vector<HermitianMatrix>& matrices() const { return matrices_; }
  const std::vector<MonotoneFn>& fns() const { return fns_; }

  /// All coefficient matrices real symmetric.
  bool is_real() const { return is_real_; }

 private:
  std::vector<HermitianMatrix> matrices_;
  std::vector<MonotoneFn> fns_;
  Index n_ = 0;
  bool is_real_ = true;
};

/// rho(x) = [x^H A_1 x, ..., x^H A_m x].
RealVector rho_map(const Problem& problem, const UnitVector& x);

/// H(x) = sum_i h_i(x^H A_i x) A_i.
HermitianMatrix assemble_h(const Problem& problem, const UnitVector& x);

/// F(x) = sum_i phi_i(x^H A_i x).
double objective(const Problem& problem, const UnitVector& x);

/// ||H(x)x - (x^H H(x) x) x||_2 / ||H(x)||_1. Returns +infinity when H(x)
/// vanishes.
double residual(const Problem& problem, const UnitVector& x);

/// Directional derivative DH(x)[d] = 2 sum_i Re(x^H A_i d) h_i'(x^H A_i x) A_i.
HermitianMatrix dh_directional(const Problem& problem, const UnitVector& x, const Vector& d);

/// Second-order characteristic function at x_star:
///   d^H (H - (x^H H x) I) d + 2 sum_i h_i' (Re(d^H A_i x))^2.
double characteristic_quadratic(const Problem& problem, const UnitVector& x_star, const Vector& d);

}  // namespace mnepv

#endif  // MNEPV_PROBLEM_HPP
