// Copyright The mnepv Authors
// SPDX-License-Identifier: Apache-2.0

#include "mnepv/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kernels.hpp"
#include "mnepv/errors.hpp"

namespace mnepv {

std::string_view to_string(AccelStatus s) {
  switch (s) {
    case AccelStatus::NotAttempted: return "not_attempted";
    case AccelStatus::AcceptedIncreasedF: return "accepted";
    case AccelStatus::RejectedDecreasedF: return "rejected";
    case AccelStatus::SolveFailed: return "solve_failed";
  }
  return "unknown";
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Converged: return "converged";
    case Termination::MaxIterations: return "max_iterations";
    case Termination::Stagnated: return "stagnated";
    case Termination::ZeroOperator: return "zero_operator";
    case Termination::KernelFailure: return "kernel_failure";
  }
  return "unknown";
}

namespace detail {

EigPair top_eigpair(const HermitianMatrix& h, const Vector& warm, double inner_tol,
                    Index dense_max_n) {
  if (h.n() <= dense_max_n) return largest_eigpair(h);
  return largest_eigpair(as_operator(h), inner_tol, warm);
}

}  // namespace detail

namespace {

// Columns Y_i = P A_i x = A_i x - rho_i x, scaled by sqrt(2 h_i').
Matrix scaled_projected(const Problem& problem, const UnitVector& x,
                        const detail::Evaluation& ev) {
  Matrix y(problem.n(), problem.m());
  for (Index i = 0; i < problem.m(); ++i) {
    const double hp = problem.fn(i).hprime(ev.rho(i));
    y.col(i) = std::sqrt(2.0 * hp) * (ev.ax[static_cast<std::size_t>(i)] - ev.rho(i) * x.vec());
  }
  return y;
}

HermitianMatrix jacobian_sym_from(const Problem& problem, const UnitVector& x,
                                  const detail::Evaluation& ev) {
  const Matrix y = scaled_projected(problem, x, ev);
  if (ev.h.is_real() && detail::is_real_vector(x.vec())) {
    const RealMatrix yr = y.real();
    return HermitianMatrix::from_real(ev.h.real_data() + yr * yr.transpose());
  }
  return HermitianMatrix(ev.h.data() + y * y.adjoint());
}

UnitVector accel_from(const Problem& problem, const UnitVector& x, const detail::Evaluation& ev,
                      double inner_tol, Index dense_max_n) {
  const double sigma = ev.rayleigh;
  Vector w;
  if (problem.n() <= dense_max_n) {
    w = solve_shifted(jacobian_sym_from(problem, x, ev), sigma, x.vec());
  } else {
    const Matrix y = scaled_projected(problem, x, ev);
    const HermitianMatrix h = ev.h;
    const LinearOperator js{problem.n(), [h, y](const Vector& v) -> Vector {
                              return detail::apply(h, v) + y * (y.adjoint() * v);
                            }};
    w = solve_shifted(js, sigma, x.vec(), inner_tol);
  }
  if (!w.allFinite() || w.norm() == 0.0) {
    throw SingularSystemError("inverse step produced a degenerate vector");
  }
  return UnitVector(w);
}

double adaptive_inner_tol(double res) {
  if (!std::isfinite(res)) return 1e-3;
  return std::max(std::min(1e-3, res * res), 1e-14);
}

}  // namespace

ScfStep scf_step(const Problem& problem, const UnitVector& x_k, double inner_tol,
                 Index dense_max_n) {
  detail::check_size(problem, x_k.size(), "vector");
  const HermitianMatrix h = assemble_h(problem, x_k);
  const EigPair p = detail::top_eigpair(h, x_k.vec(), inner_tol, dense_max_n);
  return {p.value, p.vector};
}

HermitianMatrix jacobian_sym(const Problem& problem, const UnitVector& x) {
  return jacobian_sym_from(problem, x, detail::evaluate(problem, x));
}

Vector jacobian_coupling(const Problem& problem, const UnitVector& x) {
  const detail::Evaluation ev = detail::evaluate(problem, x);
  Vector q = Vector::Zero(problem.n());
  for (Index i = 0; i < problem.m(); ++i) {
    const double hp = problem.fn(i).hprime(ev.rho(i));
    if (hp == 0.0) continue;
    q += (2.0 * hp * ev.rho(i)) * (ev.ax[static_cast<std::size_t>(i)] - ev.rho(i) * x.vec());
  }
  return q;
}

UnitVector accel_step(const Problem& problem, const UnitVector& x_k, double inner_tol,
                      Index dense_max_n) {
  return accel_from(problem, x_k, detail::evaluate(problem, x_k), inner_tol, dense_max_n);
}

SolveReport solve(const Problem& problem, const UnitVector& x0, const SolveOptions& opts) {
  detail::check_size(problem, x0.size(), "start vector");
  if (opts.max_iter < 0) throw ValidationError("max_iter must be non-negative");
  if (!(opts.tol > 0.0)) throw ValidationError("tol must be positive");

  SolveReport r;
  UnitVector x = x0;
  detail::Evaluation ev = detail::evaluate(problem, x);
  r.objective_history.push_back(ev.objective);
  r.residual_history.push_back(ev.residual);
  r.lambda_history.push_back(ev.rayleigh);
  r.accel_log.push_back(AccelStatus::NotAttempted);
  if (opts.record_history) r.iterates.push_back(x);

  auto finish = [&](Termination t) {
    r.termination = t;
    r.converged = t == Termination::Converged;
    r.x_star = x;
    r.lambda_star = ev.rayleigh;
    return r;
  };

  if (!std::isfinite(ev.residual)) return finish(Termination::ZeroOperator);

  for (int k = 1; k <= opts.max_iter; ++k) {
    const double inner = adaptive_inner_tol(ev.residual);
    EigPair step;
    try {
      step = detail::top_eigpair(ev.h, x.vec(), inner, opts.dense_max_n);
    } catch (const ConvergenceError&) {
      return finish(Termination::KernelFailure);
    }
    x = step.vector;
    ev = detail::evaluate(problem, x);
    r.iterations = k;
    r.residual_history.push_back(ev.residual);
    r.lambda_history.push_back(step.value);

    AccelStatus accel = AccelStatus::NotAttempted;
    const bool done = ev.residual <= opts.tol;
    if (!done && std::isfinite(ev.residual) && ev.residual <= opts.tol_acc) {
      try {
        const UnitVector xt =
            accel_from(problem, x, ev, adaptive_inner_tol(ev.residual), opts.dense_max_n);
        detail::Evaluation evt = detail::evaluate(problem, xt);
        if (evt.objective > ev.objective) {
          x = xt;
          ev = std::move(evt);
          accel = AccelStatus::AcceptedIncreasedF;
        } else {
          accel = AccelStatus::RejectedDecreasedF;
        }
      } catch (const SingularSystemError&) {
        accel = AccelStatus::SolveFailed;
      }
    }
    r.objective_history.push_back(ev.objective);
    r.accel_log.push_back(accel);
    if (opts.record_history) r.iterates.push_back(x);

    if (done) return finish(Termination::Converged);
    if (!std::isfinite(ev.residual)) return finish(Termination::ZeroOperator);
    const auto w = static_cast<std::size_t>(opts.stagnation_window);
    if (opts.stagnation_window > 0 && static_cast<std::size_t>(k) >= w) {
      const double past = r.residual_history[static_cast<std::size_t>(k) - w];
      if (r.residual_history.back() > opts.stagnation_factor * past) {
        return finish(Termination::Stagnated);
      }
    }
  }
  return finish(Termination::MaxIterations);
}

}  // namespace mnepv
