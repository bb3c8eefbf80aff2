// Copyright The mnepv Authors
// SPDX-License-Identifier: Apache-2.0

#include "mnepv/apps.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "kernels.hpp"
#include "mnepv/errors.hpp"
#include "mnepv/rng.hpp"
#include "text.hpp"

namespace mnepv {

namespace {

const SolveReport& best_report(const MultistartResult& runs, const char* what) {
  if (!runs.best) {
    double best_f = -std::numeric_limits<double>::infinity();
    double best_res = std::numeric_limits<double>::infinity();
    for (const auto& r : runs.reports) {
      if (!r.objective_history.empty() && r.objective_history.back() > best_f) {
        best_f = r.objective_history.back();
        best_res = r.residual_history.back();
      }
    }
    throw ConvergenceError(std::string(what) + ": no run converged", best_f, best_res);
  }
  return runs.reports[*runs.best];
}

// -2 t, with roundoff-level negatives clamped to 0.
double neg_twice(double t, const char* what) {
  const double v = -2.0 * t;
  if (v < -1e-12) {
    throw Error(std::string(what) + " is negative (" + detail::shortest(v) +
                "); the coefficient matrices violate the dHDAE structure");
  }
  return std::max(v, 0.0);
}

}  // namespace

// ---------------------------------------------------------------------------
// (Joint) numerical radius

Problem numrad_problem(const Matrix& b) {
  if (b.rows() != b.cols() || b.rows() == 0) throw DimensionError("B must be square and non-empty");
  const Complex i(0.0, 1.0);
  std::vector<HermitianMatrix> a;
  a.emplace_back(Matrix((b.adjoint() + b) * 0.5));
  a.emplace_back(Matrix((b.adjoint() - b) * (i * 0.5)));
  return quartic_problem(std::move(a));
}

Problem quartic_problem(std::vector<HermitianMatrix> matrices) {
  std::vector<MonotoneFn> fns(matrices.size(), MonotoneFn::identity());
  return Problem(std::move(matrices), std::move(fns));
}

RadiusResult joint_numrad(std::vector<HermitianMatrix> matrices, const SolveOptions& opts,
                          std::span<const UnitVector> starts, std::size_t num_starts,
                          std::uint64_t seed, unsigned jobs) {
  const Problem problem = quartic_problem(std::move(matrices));
  std::vector<UnitVector> sampled;
  if (starts.empty()) {
    sampled = supporting_starts(problem, num_starts, seed, opts.dense_max_n);
    starts = sampled;
  }
  RadiusResult out;
  out.runs = multistart(problem, starts, opts, jobs);
  const SolveReport& best = best_report(out.runs, "joint numerical radius");
  out.x = best.x_star;
  out.r = rho_map(problem, out.x).norm();
  return out;
}

RadiusResult numerical_radius(const Matrix& b, const SolveOptions& opts,
                              std::span<const UnitVector> starts, std::size_t num_starts,
                              std::uint64_t seed, unsigned jobs) {
  const Problem p = numrad_problem(b);
  return joint_numrad(p.matrices(), opts, starts, num_starts, seed, jobs);
}

// ---------------------------------------------------------------------------
// Tensors

TensorPS3::TensorPS3(Index n, Index m, const std::vector<TensorEntry>& entries) : n_(n), m_(m) {
  if (n <= 0 || m <= 0) throw DimensionError("tensor dimensions must be positive");
  // Raw sums keyed by (k, j, i); both orientations kept.
  std::map<std::tuple<Index, Index, Index>, double> raw;
  for (const auto& e : entries) {
    if (e.i < 0 || e.i >= n || e.j < 0 || e.j >= n || e.k < 0 || e.k >= m) {
      throw DimensionError("tensor entry (" + std::to_string(e.i) + ", " + std::to_string(e.j) +
                           ", " + std::to_string(e.k) + ") out of range");
    }
    if (!std::isfinite(e.value)) throw ValidationError("tensor entry is not finite");
    raw[{e.k, e.j, e.i}] += e.value;
  }
  auto lookup = [&](Index i, Index j, Index k) {
    const auto it = raw.find({k, j, i});
    return it == raw.end() ? 0.0 : it->second;
  };
  std::map<std::tuple<Index, Index, Index>, double> canon;
  for (const auto& [key, v] : raw) {
    const auto [k, j, i] = key;
    const Index lo = std::min(i, j);
    const Index hi = std::max(i, j);
    if (canon.count({k, hi, lo})) continue;
    if (lo == hi) {
      canon[{k, hi, lo}] = v;
      continue;
    }
    const double a = lookup(lo, hi, k);
    const double b = lookup(hi, lo, k);
    if (a != b) input_symmetric_ = false;
    canon[{k, hi, lo}] = 0.5 * (a + b);
  }
  for (const auto& [key, v] : canon) {
    if (v == 0.0) continue;
    const auto [k, j, i] = key;
    entries_.push_back({i, j, k, v});
  }
}

std::vector<TensorEntry> TensorPS3::expanded_entries() const {
  std::vector<TensorEntry> out;
  out.reserve(2 * entries_.size());
  for (const auto& e : entries_) {
    out.push_back(e);
    if (e.i != e.j) out.push_back({e.j, e.i, e.k, e.value});
  }
  return out;
}

bool TensorPS3::is_nonnegative() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const TensorEntry& e) { return e.value >= 0.0; });
}

double TensorPS3::value(Index i, Index j, Index k) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_ || k < 0 || k >= m_) {
    throw DimensionError("tensor index out of range");
  }
  const TensorEntry key{std::min(i, j), std::max(i, j), k, 0.0};
  const auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                                   [](const TensorEntry& a, const TensorEntry& b) {
                                     return std::tie(a.k, a.j, a.i) < std::tie(b.k, b.j, b.i);
                                   });
  if (it != entries_.end() && it->i == key.i && it->j == key.j && it->k == k) return it->value;
  return 0.0;
}

RealMatrix TensorPS3::slice(Index k) const {
  if (k < 0 || k >= m_) throw DimensionError("slice index out of range");
  RealMatrix a = RealMatrix::Zero(n_, n_);
  for (const auto& e : entries_) {
    if (e.k != k) continue;
    a(e.i, e.j) = e.value;
    a(e.j, e.i) = e.value;
  }
  return a;
}

double TensorPS3::frobenius_norm_sq() const {
  double s = 0.0;
  for (const auto& e : entries_) s += (e.i == e.j ? 1.0 : 2.0) * e.value * e.value;
  return s;
}

Problem tensor_problem(const TensorPS3& t) {
  std::vector<HermitianMatrix> a;
  a.reserve(static_cast<std::size_t>(t.m()));
  for (Index k = 0; k < t.m(); ++k) a.push_back(HermitianMatrix::from_real(t.slice(k)));
  return quartic_problem(std::move(a));
}

RankOneResult rank_one_from(const TensorPS3& t, const UnitVector& x) {
  const Problem problem = tensor_problem(t);
  const RealVector rho = rho_map(problem, x);
  const double nrm = rho.norm();
  if (nrm == 0.0) throw ValidationError("rho(x) vanishes; no rank-one direction");
  RankOneResult out;
  out.x = x;
  out.z = rho / nrm;
  out.mu = out.z.dot(rho);
  out.lambda = eigvals(assemble_h(problem, x))(0);
  out.fit = t.frobenius_norm_sq() - out.mu * out.mu;
  out.objective = objective(problem, x);
  return out;
}

std::vector<UnitVector> nonnegative_starts(Index n, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<UnitVector> out;
  out.reserve(count);
  while (out.size() < count) {
    const RealVector g = rng.normal_vector(n).cwiseAbs();
    if (g.norm() > 0.0) out.push_back(UnitVector::from_real(g));
  }
  return out;
}

RankOneResult tensor_rank_one(const TensorPS3& t, const SolveOptions& opts,
                              std::span<const UnitVector> starts, std::size_t num_starts,
                              std::uint64_t seed, unsigned jobs) {
  const Problem problem = tensor_problem(t);
  std::vector<UnitVector> sampled;
  if (starts.empty()) {
    sampled = nonnegative_starts(t.n(), num_starts, seed);
    starts = sampled;
  }
  MultistartResult runs = multistart(problem, starts, opts, jobs);
  const SolveReport& best = best_report(runs, "tensor rank-one");
  RankOneResult out = rank_one_from(t, best.x_star);
  out.runs = std::move(runs);
  return out;
}

std::vector<RealVector> als_reference(const TensorPS3& t, const RealVector& x0, int max_iter) {
  if (x0.size() != t.n()) throw DimensionError("start vector length must equal n");
  if (x0.norm() == 0.0) throw ValidationError("start vector is zero");
  std::vector<RealMatrix> slices;
  for (Index k = 0; k < t.m(); ++k) slices.push_back(t.slice(k));

  std::vector<RealVector> xs{x0 / x0.norm()};
  for (int it = 0; it < max_iter; ++it) {
    const RealVector& x = xs.back();
    RealVector z(t.m());
    for (Index k = 0; k < t.m(); ++k) z(k) = x.dot(slices[static_cast<std::size_t>(k)] * x);
    const double nz = z.norm();
    if (nz == 0.0) throw ValidationError("ALS: rho(x) vanishes");
    z /= nz;
    RealMatrix a = RealMatrix::Zero(t.n(), t.n());
    for (Index k = 0; k < t.m(); ++k) a += z(k) * slices[static_cast<std::size_t>(k)];
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(a);
    RealVector v = es.eigenvectors().col(t.n() - 1);
    Index big = 0;
    v.cwiseAbs().maxCoeff(&big);
    if (v(big) < 0.0) v = -v;
    xs.push_back(v / v.norm());
  }
  return xs;
}

// ---------------------------------------------------------------------------
// dHDAE

Problem dhdae_problem(const RealMatrix& j, std::span<const RealMatrix> b) {
  const Index n = j.rows();
  if (j.cols() != n || n == 0) throw DimensionError("J must be square and non-empty");
  const double jn = j.cwiseAbs().colwise().sum().maxCoeff();
  if ((j + j.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, jn)) {
    throw ValidationError("J is not skew-symmetric");
  }
  if (b.empty()) throw DimensionError("at least one B matrix is required");

  RealMatrix a1 = -j.transpose() * j;
  std::vector<HermitianMatrix> mats;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const RealMatrix& bi = b[i];
    if (bi.rows() != n || bi.cols() != n) throw DimensionError("B matrices must match J in size");
    const HermitianMatrix h = HermitianMatrix::from_real(bi);
    const double bn = std::max(1.0, h.norm1());
    if (eigvals(h).minCoeff() < -1e-10 * bn) {
      throw ValidationError("B_" + std::to_string(i) + " is not positive semi-definite");
    }
    a1.noalias() -= h.real_data().transpose() * h.real_data();
    mats.push_back(h);
  }
  std::vector<HermitianMatrix> all{HermitianMatrix::from_real(0.5 * (a1 + a1.transpose()))};
  std::vector<MonotoneFn> fns{MonotoneFn::constant(1.0)};
  for (auto& h : mats) {
    all.push_back(std::move(h));
    fns.push_back(MonotoneFn::identity());
  }
  return Problem(std::move(all), std::move(fns));
}

DhdaeBound dhdae_distance(const RealMatrix& j, std::span<const RealMatrix> b,
                          const SolveOptions& opts, const DhdaeOptions& dopts) {
  const Problem problem = dhdae_problem(j, b);
  const EigDecomposition a1 = eig_full(problem.matrix(0));
  const UnitVector x0(Vector(a1.vectors.col(0)));

  DhdaeBound out;
  out.delta_m = std::sqrt(neg_twice(a1.values(0), "-2 lambda_max(A_1)"));
  out.f_start = objective(problem, x0);
  out.d_start = std::sqrt(neg_twice(out.f_start, "-2 F(x0)"));

  std::vector<UnitVector> starts{x0};
  if (dopts.start == DhdaeStart::Multistart) {
    const auto more = supporting_starts(problem, dopts.num_starts, dopts.seed, opts.dense_max_n);
    starts.insert(starts.end(), more.begin(), more.end());
  }
  out.runs = multistart(problem, starts, opts, dopts.jobs);

  std::size_t pick = 0;
  for (std::size_t r = 1; r < out.runs.reports.size(); ++r) {
    if (out.runs.reports[r].objective_history.back() >
        out.runs.reports[pick].objective_history.back()) {
      pick = r;
    }
  }
  out.report = out.runs.reports[pick];
  out.x_star = out.report.x_star;
  out.f_star = out.report.objective_history.back();
  out.d_est = std::sqrt(neg_twice(out.f_star, "-2 F(x*)"));
  return out;
}

}  // namespace mnepv
