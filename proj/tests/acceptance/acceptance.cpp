// Copyright The mnepv Authors
// SPDX-License-Identifier: Apache-2.0

// End-to-end acceptance checks. Prints one PASS/FAIL line per check and
// exits non-zero if any check fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <Eigen/Eigenvalues>

#include "cli.hpp"
#include "generators.hpp"
#include "mnepv/mnepv.hpp"

namespace {

using namespace mnepv;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

// ---------------------------------------------------------------------------
// Shared random suite: 200 problems with random starts.

struct SuiteRun {
  Problem problem;
  SolveReport report;
};

const std::vector<SuiteRun>& suite() {
  static const std::vector<SuiteRun> runs = [] {
    std::vector<SuiteRun> out;
    Rng rng(1001);
    for (int j = 0; j < 200; ++j) {
      const Index n = rng.integer(5, 40);
      const Index m = rng.integer(1, 5);
      const bool complex = j % 2 == 0;
      Problem p = testing::random_problem(n, m, complex, rng);
      const UnitVector x0 = testing::random_unit(n, complex, rng);
      SolveReport r = solve(p, x0);
      out.push_back({std::move(p), std::move(r)});
    }
    return out;
  }();
  return runs;
}

double suite_seconds = 0.0;

Outcome check_monotonicity() {
  const auto t0 = Clock::now();
  const auto& runs = suite();
  suite_seconds = seconds_since(t0);
  double worst = 0.0;
  std::size_t pairs = 0;
  for (const auto& run : runs) {
    const auto& f = run.report.objective_history;
    for (std::size_t k = 1; k < f.size(); ++k) {
      worst = std::max(worst, f[k - 1] - f[k]);
      ++pairs;
    }
  }
  return {worst <= 1e-12 && suite_seconds < 60.0,
          std::to_string(runs.size()) + " runs, " + std::to_string(pairs) +
              " steps, max decrease " + sci(worst) + ", " + sci(suite_seconds) + " s"};
}

Outcome check_convergence() {
  std::size_t converged = 0;
  double worst = 0.0;
  for (const auto& run : suite()) {
    if (!run.report.converged || run.report.residual_history.back() > 1e-13) continue;
    ++converged;
    const HermitianMatrix h = assemble_h(run.problem, run.report.x_star);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.data(), Eigen::EigenvaluesOnly);
    const double top = es.eigenvalues().maxCoeff();
    worst = std::max(worst, std::abs(run.report.lambda_star - top) / h.norm1());
  }
  const double frac = static_cast<double>(converged) / static_cast<double>(suite().size());
  return {frac >= 0.99 && worst <= 1e-10,
          std::to_string(converged) + "/" + std::to_string(suite().size()) +
              " converged, max |lambda* - lambda_max|/||H||_1 = " + sci(worst)};
}

// ---------------------------------------------------------------------------
// Test-matrix example (three local maximizers)

std::vector<UnitVector> theta_starts(const Problem& p) {
  const auto dirs = direction_grid(2, 100);
  std::vector<UnitVector> out;
  for (const auto& pt : supporting_points(p, dirs)) out.push_back(pt.x_v);
  return out;
}

Outcome check_example_clusters() {
  const Problem p = numrad_problem(testing::example_b());
  const auto starts = theta_starts(p);
  const MultistartResult acc = multistart(p, starts);
  SolveOptions plain_opts;
  plain_opts.tol_acc = 0.0;
  const MultistartResult plain = multistart(p, starts, plain_opts);
  std::size_t conv = 0;
  std::size_t not_slower = 0;
  for (std::size_t j = 0; j < starts.size(); ++j) {
    conv += acc.reports[j].converged && plain.reports[j].converged;
    not_slower += acc.reports[j].iterations <= plain.reports[j].iterations;
  }
  double spread = 0.0;
  for (const auto& c : acc.clusters) {
    for (std::size_t j : c.members) {
      spread = std::max(spread, c.objective - acc.reports[j].objective_history.back());
    }
  }
  return {acc.clusters.size() == 3 && conv == starts.size() && not_slower >= 90,
          std::to_string(acc.clusters.size()) + " clusters, " + std::to_string(conv) +
              "/100 converged, accelerated <= plain on " + std::to_string(not_slower) +
              "/100, in-cluster spread " + sci(spread)};
}

// max over theta of lambda_max(cos t A1 + sin t A2), grid plus golden-section refinement.
double radius_oracle(const Matrix& b) {
  const Matrix a1 = (b.adjoint() + b) * 0.5;
  const Matrix a2 = (b.adjoint() - b) * Complex(0.0, 0.5);
  auto f = [&](double t) {
    const Matrix h = std::cos(t) * a1 + std::sin(t) * a2;
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
  };
  constexpr int kGrid = 100000;
  const double step = 2.0 * std::numbers::pi / kGrid;
  std::vector<double> vals(kGrid);
  for (int i = 0; i < kGrid; ++i) vals[static_cast<std::size_t>(i)] = f(i * step);
  const double grid_max = *std::max_element(vals.begin(), vals.end());
  double best = grid_max;
  // Refine every grid-local maximum close to the top.
  for (int i = 0; i < kGrid; ++i) {
    const double v = vals[static_cast<std::size_t>(i)];
    const double l = vals[static_cast<std::size_t>((i + kGrid - 1) % kGrid)];
    const double r = vals[static_cast<std::size_t>((i + 1) % kGrid)];
    if (v < l || v < r || v < grid_max - 1e-3) continue;
    double lo = (i - 1) * step;
    double hi = (i + 1) * step;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - g * (hi - lo);
    double d = lo + g * (hi - lo);
    double fc = f(c);
    double fd = f(d);
    while (hi - lo > 1e-10) {
      if (fc > fd) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - g * (hi - lo);
        fc = f(c);
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + g * (hi - lo);
        fd = f(d);
      }
    }
    best = std::max({best, fc, fd});
  }
  return best;
}

Outcome check_numerical_radius() {
  std::vector<Matrix> mats{testing::example_b()};
  Rng rng(404);
  for (int j = 0; j < 20; ++j) mats.push_back(testing::random_complex(10, 10, rng));
  double worst = 0.0;
  double solver_time = 0.0;
  for (const auto& b : mats) {
    const auto t0 = Clock::now();
    const RadiusResult r = numerical_radius(b, SolveOptions{});
    solver_time += seconds_since(t0);
    worst = std::max(worst, std::abs(r.r - radius_oracle(b)));
  }
  return {worst <= 1e-8 && solver_time < 30.0,
          std::to_string(mats.size()) + " matrices, max |r - oracle| = " + sci(worst) +
              ", solver time " + sci(solver_time) + " s"};
}

Outcome check_linear_reduction() {
  Rng rng(505);
  int one_step = 0;
  double worst = 0.0;
  for (int j = 0; j < 50; ++j) {
    const Index n = rng.integer(5, 40);
    const HermitianMatrix a = testing::random_hermitian(n, j % 2 == 0, rng);
    const Problem p({a}, {MonotoneFn::constant(rng.uniform(0.5, 2.0))});
    const SolveReport r = solve(p, testing::random_unit(n, true, rng));
    one_step += r.converged && r.iterations == 1;
    // Independent oracle: general (non-Hermitian) eigensolver.
    Eigen::ComplexEigenSolver<Matrix> ces(a.data());
    Index top = 0;
    ces.eigenvalues().real().maxCoeff(&top);
    const Vector v = ces.eigenvectors().col(top).normalized();
    const Vector& x = r.x_star.vec();
    worst = std::max(worst, (v - x.dot(v) * x).norm());
  }
  return {one_step == 50 && worst <= 1e-10,
          std::to_string(one_step) + "/50 solved in one step, max sin angle " + sci(worst)};
}

// Geometric-mean ratio of sin angles to x* over the last `count` iterates
// above the roundoff floor.
double contraction_factor(const SolveReport& r, int count) {
  std::vector<double> s;
  for (const auto& x : r.iterates) {
    const Complex c = r.x_star.vec().dot(x.vec());
    s.push_back((x.vec() - c * r.x_star.vec()).norm());
  }
  std::vector<double> logs;
  for (std::size_t k = 1; k < s.size(); ++k) {
    if (s[k] < 1e-9) break;
    logs.push_back(std::log(s[k] / s[k - 1]));
  }
  if (logs.size() > static_cast<std::size_t>(count)) logs.erase(logs.begin(), logs.end() - count);
  if (logs.empty()) return std::nan("");
  double acc = 0.0;
  for (double l : logs) acc += l;
  return std::exp(acc / static_cast<double>(logs.size()));
}

Outcome check_stability() {
  Rng rng(606);
  double worst_sym = 0.0;
  double worst_psd = 0.0;
  std::size_t probed = 0;
  for (const auto& run : suite()) {
    if (!run.report.converged) continue;
    const LinearizedScfMap map(run.problem, run.report.x_star);
    if (map.dim() == 0) continue;
    ++probed;
    for (int t = 0; t < 5; ++t) {
      const Vector y = testing::random_complex(map.dim(), 1, rng);
      const Vector z = testing::random_complex(map.dim(), 1, rng);
      const Vector ly = map.apply(y);
      const Vector lz = map.apply(z);
      const double scale = std::sqrt(map.inner(ly, ly) * map.inner(z, z)) +
                           std::sqrt(map.inner(lz, lz) * map.inner(y, y)) + 1e-300;
      worst_sym = std::max(worst_sym, std::abs(map.inner(ly, z) - map.inner(y, lz)) / scale);
      worst_psd = std::min(worst_psd, map.inner(z, lz) / map.inner(z, z));
    }
  }

  const Problem p = numrad_problem(testing::example_b());
  const auto starts = theta_starts(p);
  const MultistartResult runs = multistart(p, starts);
  const UnitVector x1 = runs.reports[runs.clusters.front().representative].x_star;
  const StabilityReport st = analyze_stability(p, x1);

  // Plain SCF from a start that lands on solution I.
  SolveOptions plain;
  plain.tol_acc = 0.0;
  plain.record_history = true;
  double rate = std::nan("");
  for (std::size_t j : runs.clusters.front().members) {
    const SolveReport r = solve(p, starts[j], plain);
    if (r.converged && std::abs(r.objective_history.back() - runs.clusters.front().objective) < 1e-6) {
      rate = contraction_factor(r, 10);
      break;
    }
  }
  const bool pass = probed > 0 && worst_sym <= 1e-10 && worst_psd >= -1e-12 &&
                    st.classification == Stability::Stable && st.rho_L < 1.0 &&
                    std::abs(rate - st.rho_L) <= 0.15;
  return {pass, std::to_string(probed) + " solutions probed, self-adjointness " + sci(worst_sym) +
                    ", min <z,Lz>/<z,z> " + sci(worst_psd) + "; solution I " +
                    std::string(to_string(st.classification)) + " rho(L) = " + sci(st.rho_L) +
                    ", observed contraction " + sci(rate)};
}

// ---------------------------------------------------------------------------
// Derivatives against a quad-precision finite-difference oracle.

using Quad = __float128;

struct QComplex {
  Quad re = 0;
  Quad im = 0;
};

// h(t) = t + t^3 for the cubic member, otherwise affine a + b t.
struct QFn {
  bool cubic = false;
  double a = 0.0;
  double b = 0.0;
  Quad h(Quad t) const { return cubic ? t + t * t * t : Quad(a) + Quad(b) * t; }
};

MonotoneFn cubic_fn() {
  return MonotoneFn::custom([](double t) { return t * t / 2 + t * t * t * t / 4; },
                            [](double t) { return t + t * t * t; },
                            [](double t) { return 1 + 3 * t * t; }, "cubic");
}

struct FdInstance {
  Problem problem;
  std::vector<QFn> qfns;
};

FdInstance fd_instance(Index n, Index m, bool complex, Rng& rng) {
  std::vector<HermitianMatrix> a;
  std::vector<MonotoneFn> f;
  std::vector<QFn> q;
  for (Index i = 0; i < m; ++i) {
    a.push_back(testing::random_hermitian(n, complex, rng));
    if (i == 0 || rng.uniform() < 0.5) {
      f.push_back(cubic_fn());
      q.push_back({true, 0.0, 0.0});
    } else {
      const double aa = rng.uniform(-1.0, 1.0);
      const double bb = rng.uniform(0.0, 2.0);
      f.push_back(MonotoneFn::affine(aa, bb));
      q.push_back({false, aa, bb});
    }
  }
  return {Problem(std::move(a), std::move(f)), std::move(q)};
}

// Re(y^H A y) in quad precision.
Quad quad_form(const Matrix& a, const std::vector<QComplex>& y) {
  Quad acc = 0;
  const auto n = static_cast<Index>(y.size());
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const Quad ar = a(i, j).real();
      const Quad ai = a(i, j).imag();
      const QComplex& yi = y[static_cast<std::size_t>(i)];
      const QComplex& yj = y[static_cast<std::size_t>(j)];
      // conj(y_i) a_ij y_j, real part.
      const Quad tr = ar * yj.re - ai * yj.im;
      const Quad ti = ar * yj.im + ai * yj.re;
      acc += yi.re * tr + yi.im * ti;
    }
  }
  return acc;
}

// Coefficients h_i(rho_i(y) / scale).
std::vector<Quad> quad_coeffs(const FdInstance& inst, const std::vector<QComplex>& y, Quad scale) {
  std::vector<Quad> c;
  for (Index i = 0; i < inst.problem.m(); ++i) {
    c.push_back(inst.qfns[static_cast<std::size_t>(i)].h(quad_form(inst.problem.matrix(i).data(), y) / scale));
  }
  return c;
}

std::vector<QComplex> shifted(const Vector& x, const Vector& d, Quad alpha) {
  std::vector<QComplex> y(static_cast<std::size_t>(x.size()));
  for (Index i = 0; i < x.size(); ++i) {
    y[static_cast<std::size_t>(i)] = {Quad(x(i).real()) + alpha * Quad(d(i).real()),
                                      Quad(x(i).imag()) + alpha * Quad(d(i).imag())};
  }
  return y;
}

// ||(H(x + a d) - H(x - a d)) / (2a) - DH(x)[d]||_F with H unnormalized.
double dh_error(const FdInstance& inst, const UnitVector& x, const Vector& d, double alpha) {
  const HermitianMatrix dh = dh_directional(inst.problem, x, d);
  const Quad a = alpha;
  const auto cp = quad_coeffs(inst, shifted(x.vec(), d, a), 1);
  const auto cm = quad_coeffs(inst, shifted(x.vec(), d, -a), 1);
  const Index n = inst.problem.n();
  Quad err = 0;
  for (Index r = 0; r < n; ++r) {
    for (Index c = 0; c < n; ++c) {
      Quad fr = 0;
      Quad fi = 0;
      for (Index i = 0; i < inst.problem.m(); ++i) {
        const Quad w = (cp[static_cast<std::size_t>(i)] - cm[static_cast<std::size_t>(i)]) / (2 * a);
        fr += w * Quad(inst.problem.matrix(i)(r, c).real());
        fi += w * Quad(inst.problem.matrix(i)(r, c).imag());
      }
      const Quad er = fr - Quad(dh(r, c).real());
      const Quad ei = fi - Quad(dh(r, c).imag());
      err += er * er + ei * ei;
    }
  }
  return std::sqrt(static_cast<double>(err));
}

// G(y) = H(y / ||y||) y for real y, in quad precision.
std::vector<Quad> g_map(const FdInstance& inst, const std::vector<QComplex>& y) {
  Quad yy = 0;
  for (const auto& v : y) yy += v.re * v.re;
  const auto c = quad_coeffs(inst, y, yy);
  const Index n = inst.problem.n();
  std::vector<Quad> out(static_cast<std::size_t>(n), 0);
  for (Index r = 0; r < n; ++r) {
    for (Index i = 0; i < inst.problem.m(); ++i) {
      Quad row = 0;
      for (Index k = 0; k < n; ++k) row += Quad(inst.problem.matrix(i)(r, k).real()) * y[static_cast<std::size_t>(k)].re;
      out[static_cast<std::size_t>(r)] += c[static_cast<std::size_t>(i)] * row;
    }
  }
  return out;
}

// ||FD Jacobian - model||_F; central or forward differences.
double jacobian_error(const FdInstance& inst, const UnitVector& x, const RealMatrix& model,
                      double alpha, bool central) {
  const Index n = inst.problem.n();
  const Quad a = alpha;
  const auto g0 = g_map(inst, shifted(x.vec(), Vector::Zero(n), 0));
  Quad err = 0;
  for (Index j = 0; j < n; ++j) {
    Vector e = Vector::Zero(n);
    e(j) = 1.0;
    const auto gp = g_map(inst, shifted(x.vec(), e, a));
    const auto gm = central ? g_map(inst, shifted(x.vec(), e, -a)) : g0;
    for (Index r = 0; r < n; ++r) {
      const auto s = static_cast<std::size_t>(r);
      const Quad fd = central ? (gp[s] - gm[s]) / (2 * a) : (gp[s] - gm[s]) / a;
      const Quad diff = fd - Quad(model(r, j));
      err += diff * diff;
    }
  }
  return std::sqrt(static_cast<double>(err));
}

Outcome check_derivatives() {
  Rng rng(707);
  const double alphas[3] = {1e-4, 1e-5, 1e-6};
  // log10 of the error drop per decade of alpha.
  double dh_min = 1e9, dh_max = -1e9, jf_min = 1e9, jf_max = -1e9, jc_min = 1e9, jc_max = -1e9;
  double literal_sign = 1e300;
  for (int t = 0; t < 20; ++t) {
    const Index n = rng.integer(4, 10);
    const Index m = rng.integer(1, 4);
    const FdInstance cplx = fd_instance(n, m, true, rng);
    const UnitVector xc = testing::random_unit(n, true, rng);
    const Vector d = testing::random_complex(n, 1, rng);
    double e[3];
    for (int k = 0; k < 3; ++k) e[k] = dh_error(cplx, xc, d, alphas[k]);
    for (int k = 0; k < 2; ++k) {
      const double s = std::log10(e[k] / e[k + 1]);
      dh_min = std::min(dh_min, s);
      dh_max = std::max(dh_max, s);
    }

    const FdInstance real = fd_instance(n, m, false, rng);
    const UnitVector xr = testing::random_unit(n, false, rng);
    const RealMatrix js = jacobian_sym(real.problem, xr).real_part();
    const RealVector q = jacobian_coupling(real.problem, xr).real();
    const RealMatrix j_model = js + xr.vec().real() * q.transpose();
    double ef[3], ec[3];
    for (int k = 0; k < 3; ++k) {
      ef[k] = jacobian_error(real, xr, j_model, alphas[k], false);
      ec[k] = jacobian_error(real, xr, j_model, alphas[k], true);
    }
    for (int k = 0; k < 2; ++k) {
      jf_min = std::min(jf_min, std::log10(ef[k] / ef[k + 1]));
      jf_max = std::max(jf_max, std::log10(ef[k] / ef[k + 1]));
      jc_min = std::min(jc_min, std::log10(ec[k] / ec[k + 1]));
      jc_max = std::max(jc_max, std::log10(ec[k] / ec[k + 1]));
    }
    const RealMatrix literal = js - xr.vec().real() * q.transpose();
    literal_sign = std::min(literal_sign, jacobian_error(real, xr, literal, 1e-6, true));
  }
  const bool pass = dh_min > 1.7 && dh_max < 2.3 && jf_min > 0.7 && jf_max < 1.3 &&
                    jc_min > 1.7 && jc_max < 2.3;
  return {pass, "error decades per alpha decade: DH central [" + sci(dh_min) + ", " + sci(dh_max) +
                    "], J = J_s + x q^T forward [" + sci(jf_min) + ", " + sci(jf_max) +
                    "] central [" + sci(jc_min) + ", " + sci(jc_max) +
                    "]; the sign J = J_s - x q^T is off by >= " + sci(literal_sign)};
}

// ---------------------------------------------------------------------------
// Acceleration on dHDAE instances.

Outcome check_acceleration() {
  Rng rng(808);
  SolveOptions acc;
  SolveOptions plain;
  plain.tol_acc = 0.0;
  double fitted_c = 0.0;
  std::size_t pairs = 0;
  int halved = 0;
  int total_acc = 0, total_plain = 0;
  for (int t = 0; t < 20; ++t) {
    const testing::DhdaeInstance inst =
        t % 2 == 0 ? testing::random_dhdae_linear(200, rng) : testing::random_dhdae_quadratic(200, rng);
    const Problem p = dhdae_problem(inst.j, inst.b);
    const UnitVector x0 = largest_eigpair(p.matrix(0)).vector;
    const SolveReport ra = solve(p, x0, acc);
    const SolveReport rp = solve(p, x0, plain);
    total_acc += ra.iterations;
    total_plain += rp.iterations;
    halved += ra.converged && rp.converged && 2 * ra.iterations <= rp.iterations;
    for (std::size_t k = 1; k + 1 < ra.residual_history.size(); ++k) {
      if (ra.accel_log[k] != AccelStatus::AcceptedIncreasedF) continue;
      const double r0 = ra.residual_history[k];
      const double r1 = ra.residual_history[k + 1];
      // Below 10 tol the next residual sits on the roundoff floor.
      if (r0 > 0.1 || r1 <= 10.0 * acc.tol) continue;
      fitted_c = std::max(fitted_c, r1 / (r0 * r0));
      ++pairs;
    }
  }
  return {pairs > 0 && fitted_c < 1e3 && halved >= 16,
          std::to_string(pairs) + " accepted steps, fitted C = " + sci(fitted_c) + "; accelerated <= plain/2 on " +
              std::to_string(halved) + "/20 (iterations " + std::to_string(total_acc) + " vs " +
              std::to_string(total_plain) + ")"};
}

// ---------------------------------------------------------------------------
// Tensors

TensorPS3 random_nonnegative_tensor(Index n, Index m, Rng& rng) {
  std::vector<TensorEntry> e;
  for (Index k = 0; k < m; ++k) {
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i <= j; ++i) {
        if (rng.uniform() < 0.6) e.push_back({i, j, k, rng.uniform()});
      }
    }
  }
  for (Index k = 0; k < m; ++k) e.push_back({0, 0, k, rng.uniform() + 0.1});
  // Mirror the upper entries so the input is already symmetric.
  const std::size_t base = e.size();
  for (std::size_t t = 0; t < base; ++t) {
    if (e[t].i != e[t].j) e.push_back({e[t].j, e[t].i, e[t].k, e[t].value});
  }
  return TensorPS3(n, m, e);
}

Outcome check_als() {
  Rng rng(909);
  SolveOptions plain;
  plain.tol_acc = 0.0;
  plain.record_history = true;
  double worst = 0.0;
  double most_negative = 0.0;
  std::size_t steps = 0;
  for (int t = 0; t < 30; ++t) {
    const Index n = rng.integer(5, 12);
    const Index m = rng.integer(2, 6);
    const TensorPS3 tensor = random_nonnegative_tensor(n, m, rng);
    const Problem p = tensor_problem(tensor);
    const UnitVector x0 = nonnegative_starts(n, 1, rng.integer(0, 1 << 30)).front();
    const SolveReport r = solve(p, x0, plain);
    const auto als = als_reference(tensor, x0.vec().real(), r.iterations);
    for (std::size_t k = 0; k < r.iterates.size(); ++k) {
      const Vector& x = r.iterates[k].vec();
      worst = std::max(worst, (x.real() - als[k]).cwiseAbs().maxCoeff());
      worst = std::max(worst, x.imag().cwiseAbs().maxCoeff());
      most_negative = std::min({most_negative, x.real().minCoeff(), als[k].minCoeff()});
      ++steps;
    }
  }
  return {worst <= 1e-12 && most_negative >= -1e-12,
          std::to_string(steps) + " iterates compared, max |SCF - ALS| = " + sci(worst) +
              ", min entry " + sci(most_negative)};
}

// ||T - mu x (x) x (x) z||_F^2 evaluated densely.
double rank_one_residual_sq(const TensorPS3& t, const RankOneResult& r) {
  double s = 0.0;
  const RealVector x = r.x.vec().real();
  for (Index k = 0; k < t.m(); ++k) {
    const RealMatrix diff = t.slice(k) - r.mu * r.z(k) * x * x.transpose();
    s += diff.squaredNorm();
  }
  return s;
}

Outcome check_tensor_identities() {
  Rng rng(1010);
  double worst_lambda = 0.0;
  double worst_fit = 0.0;
  int results = 0;
  for (int t = 0; t < 30; ++t) {
    const Index n = rng.integer(5, 12);
    const Index m = rng.integer(2, 6);
    TensorPS3 tensor = random_nonnegative_tensor(n, m, rng);
    if (t % 2 == 1) {
      // Signed entries exercise the general (non-Perron) case.
      std::vector<TensorEntry> e = tensor.expanded_entries();
      for (auto& x : e) x.value -= 0.5;
      tensor = TensorPS3(n, m, e);
    }
    const RankOneResult r = tensor_rank_one(tensor, SolveOptions{}, {}, 10, static_cast<std::uint64_t>(t));
    ++results;
    const double mu2 = r.mu * r.mu;
    worst_lambda = std::max(worst_lambda, std::abs(r.lambda - mu2) / mu2);
    const double norm2 = tensor.frobenius_norm_sq();
    worst_fit = std::max(worst_fit, std::abs(mu2 + rank_one_residual_sq(tensor, r) - norm2) / norm2);
  }
  return {worst_lambda <= 1e-10 && worst_fit <= 1e-8,
          std::to_string(results) + " rank-one results, max |lambda - mu^2|/mu^2 = " + sci(worst_lambda) +
              ", max Pythagoras defect " + sci(worst_fit)};
}

// ---------------------------------------------------------------------------
// dHDAE bound chain

Outcome check_dhdae_chain() {
  Rng rng(1111);
  double worst = 1e300;
  for (int t = 0; t < 20; ++t) {
    const Index n = t < 10 ? 50 : 200;
    const testing::DhdaeInstance inst =
        t % 2 == 0 ? testing::random_dhdae_linear(n, rng) : testing::random_dhdae_quadratic(n, rng);
    const DhdaeBound b = dhdae_distance(inst.j, inst.b);
    worst = std::min({worst, b.d_start - b.d_est, b.delta_m - b.d_start});
  }
  const RealMatrix zero = RealMatrix::Zero(6, 6);
  const std::vector<RealMatrix> eye{RealMatrix::Identity(6, 6)};
  const DhdaeBound a = dhdae_distance(zero, eye);
  const double analytic = std::max(std::abs(a.d_est - 1.0), std::abs(a.delta_m - std::sqrt(2.0)));
  return {worst >= -1e-10 && analytic <= 1e-12,
          "20 instances, min slack in d_est <= d_start <= delta_M: " + sci(worst) +
              "; J = 0, B = I gives error " + sci(analytic)};
}

// ---------------------------------------------------------------------------
// Supporting hyperplanes

Outcome check_supporting() {
  Rng rng(1212);
  double worst = -1e300;
  for (int t = 0; t < 20; ++t) {
    const Index n = rng.integer(4, 12);
    const Index m = rng.integer(2, 4);
    const bool complex = t % 2 == 0;
    const Problem p = testing::random_problem(n, m, complex, rng);
    std::vector<RealVector> dirs;
    for (int d = 0; d < 50; ++d) dirs.push_back(rng.unit_vector(m));
    const auto pts = supporting_points(p, dirs);
    for (const auto& pt : pts) {
      const double top = pt.v.dot(pt.y_v);
      for (int s = 0; s < 1000; ++s) {
        const RealVector y = rho_map(p, testing::random_unit(n, complex, rng));
        worst = std::max(worst, pt.v.dot(y) - top);
      }
    }
  }
  return {worst <= 1e-10, "20 problems x 50 directions x 1000 samples, max v^T(rho(x) - y_v) = " + sci(worst)};
}

// ---------------------------------------------------------------------------
// I/O determinism

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"mnepv"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

Outcome check_io() {
  const fs::path dir = fs::temp_directory_path() / ("mnepv_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::vector<std::string> failures;

  // Fixed-seed CLI runs, twice each.
  io::write_matrix_market(dir / "b.mtx", testing::example_b(), io::MmSymmetry::General, true);
  Rng rng(1313);
  const TensorPS3 tensor = random_nonnegative_tensor(6, 3, rng);
  io::write_tensor_coo(dir / "t.coo", tensor);
  const testing::DhdaeInstance inst = testing::random_dhdae_linear(20, rng);
  io::write_matrix_market(dir / "j.mtx", inst.j.cast<Complex>(), io::MmSymmetry::SkewSymmetric, false);
  io::write_matrix_market(dir / "r.mtx", inst.b[0].cast<Complex>(), io::MmSymmetry::Symmetric, false);

  const std::vector<std::vector<std::string>> commands{
      {"numrad", "--mtx", (dir / "b.mtx").string(), "--starts", "40", "--seed", "3"},
      {"tensor", "--tensor", (dir / "t.coo").string(), "--starts", "5", "--seed", "9"},
      {"dhdae", "--mtx", (dir / "j.mtx").string(), "--mtx", (dir / "r.mtx").string(), "--start",
       "greedy", "--starts", "20", "--seed", "5"},
  };
  for (std::size_t c = 0; c < commands.size(); ++c) {
    for (const char* format : {"json", "csv"}) {
      std::string bytes[2];
      for (int rep = 0; rep < 2; ++rep) {
        auto args = commands[c];
        const fs::path out = dir / ("run" + std::to_string(c) + "_" + std::to_string(rep) + "." + format);
        args.insert(args.end(), {"--out", out.string(), "--format", format});
        if (run_cli(args) != 0) failures.push_back(commands[c][0] + " exit code");
        bytes[rep] = slurp(out);
      }
      if (bytes[0].empty() || bytes[0] != bytes[1]) failures.push_back(commands[c][0] + " " + format + " bytes differ");
      if (std::string(format) == "json") {
        const io::RunArtifact a = io::from_json(bytes[0]);
        if (io::to_json(a) + "\n" != bytes[0]) failures.push_back(commands[c][0] + " json re-encode");
        if (io::from_json(io::to_json(a)) != a) failures.push_back(commands[c][0] + " json round trip");
      }
    }
  }

  // Matrix Market round trips for every symmetry class.
  const HermitianMatrix h = testing::random_hermitian(7, true, rng);
  const RealMatrix s = testing::random_hermitian(7, false, rng).real_part();
  const RealMatrix g = testing::random_real(5, 8, rng);
  const RealMatrix k = testing::random_skew(7, rng);
  struct Case {
    Matrix m;
    io::MmSymmetry sym;
    bool complex;
  };
  const std::vector<Case> cases{{h.data(), io::MmSymmetry::Hermitian, true},
                                {s.cast<Complex>(), io::MmSymmetry::Symmetric, false},
                                {g.cast<Complex>(), io::MmSymmetry::General, false},
                                {k.cast<Complex>(), io::MmSymmetry::SkewSymmetric, false},
                                {testing::random_complex(4, 6, rng), io::MmSymmetry::General, true}};
  for (std::size_t c = 0; c < cases.size(); ++c) {
    std::stringstream ss;
    io::write_matrix_market(ss, cases[c].m, cases[c].sym, cases[c].complex);
    if (io::parse_matrix_market(ss).values != cases[c].m) failures.push_back("mtx case " + std::to_string(c));
  }
  std::stringstream ts;
  io::write_tensor_coo(ts, tensor);
  const TensorPS3 back = io::parse_tensor_coo(ts);
  if (back.entries() != tensor.entries() || back.n() != tensor.n() || back.m() != tensor.m()) {
    failures.push_back("tensor coo");
  }
  fs::remove_all(dir);

  std::string detail = "3 commands x 2 formats byte-identical, JSON, Matrix Market and tensor COO round trips";
  if (!failures.empty()) {
    detail = "failures:";
    for (const auto& f : failures) detail += " [" + f + "]";
  }
  return {failures.empty(), detail};
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Entry> checks{
      {"monotone objective on the random suite", check_monotonicity},
      {"convergence and top-eigenvalue contract", check_convergence},
      {"three-solution test matrix, 100 theta starts", check_example_clusters},
      {"numerical radius against theta-grid oracle", check_numerical_radius},
      {"linear problems solved in one step", check_linear_reduction},
      {"linearized SCF map and local rate", check_stability},
      {"derivatives against finite differences", check_derivatives},
      {"quadratic acceleration on dHDAE instances", check_acceleration},
      {"SCF iterates equal ALS iterates", check_als},
      {"rank-one tensor identities", check_tensor_identities},
      {"dHDAE bound chain", check_dhdae_chain},
      {"supporting-hyperplane inequality", check_supporting},
      {"artifact determinism and round trips", check_io},
  };
  int failed = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = checks[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s  %02zu %-46s %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, checks[i].name,
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d of %zu checks passed\n", static_cast<int>(checks.size()) - failed, checks.size());
  return failed == 0 ? 0 : 1;
}
