// Copyright The mnepv Authors
// SPDX-License-Identifier: Apache-2.0

#include "mnepv/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <numeric>
#include <thread>

#include "kernels.hpp"
#include "mnepv/errors.hpp"
#include "mnepv/rng.hpp"

namespace mnepv {

std::vector<RealVector> spherical_grid(std::size_t n_eta, std::size_t n_theta) {
  std::vector<RealVector> out;
  out.reserve(n_eta * n_theta);
  for (std::size_t i = 0; i < n_eta; ++i) {
    const double eta = std::numbers::pi * (static_cast<double>(i) + 0.5) / static_cast<double>(n_eta);
    for (std::size_t j = 0; j < n_theta; ++j) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n_theta);
      RealVector v(3);
      v << std::sin(eta) * std::cos(theta), std::sin(eta) * std::sin(theta), std::cos(eta);
      out.push_back(v);
    }
  }
  return out;
}

std::vector<RealVector> direction_grid(Index m, std::size_t count, std::uint64_t seed) {
  if (m < 1) throw DimensionError("direction dimension must be positive");
  std::vector<RealVector> out;
  out.reserve(count);
  if (count == 0) return out;
  if (m == 1) {
    for (std::size_t j = 0; j < count; ++j) out.push_back(RealVector::Constant(1, j % 2 == 0 ? 1.0 : -1.0));
  } else if (m == 2) {
    for (std::size_t j = 0; j < count; ++j) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(count);
      RealVector v(2);
      v << std::cos(theta), std::sin(theta);
      out.push_back(v);
    }
  } else if (m == 3) {
    const auto n_eta = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(count) / 2.0))));
    const std::size_t n_theta = (count + n_eta - 1) / n_eta;
    out = spherical_grid(n_eta, n_theta);
    out.resize(count);
  } else {
    Rng rng(seed);
    for (std::size_t j = 0; j < count; ++j) out.push_back(rng.unit_vector(m));
  }
  return out;
}

std::vector<SupportingPoint> supporting_points(const Problem& problem,
                                               std::span<const RealVector> directions,
                                               double inner_tol, Index dense_max_n) {
  const bool dense = problem.n() <= dense_max_n;
  struct Bottom {
    RealVector v;
    EigPair pair;
  };
  std::vector<Bottom> bottoms;
  std::vector<SupportingPoint> out;
  out.reserve(directions.size());

  for (const RealVector& v : directions) {
    if (v.size() != problem.m()) throw DimensionError("direction length must equal m");
    if (!v.allFinite() || v.norm() == 0.0) throw ValidationError("direction must be finite and nonzero");

    std::optional<EigPair> top;
    if (dense) {
      for (const Bottom& b : bottoms) {
        if ((b.v + v).norm() <= 1e-14 * std::max(1.0, v.norm())) {
          top = EigPair{-b.pair.value, b.pair.vector};
          break;
        }
      }
    }
    if (!top) {
      const HermitianMatrix hv = detail::combine(problem, v);
      if (dense) {
        const EigDecomposition d = eig_full(hv);
        const Index last = d.values.size() - 1;
        top = EigPair{d.values(0), UnitVector(Vector(d.vectors.col(0)))};
        bottoms.push_back({v, EigPair{d.values(last), UnitVector(Vector(d.vectors.col(last)))}});
      } else {
        top = largest_eigpair(as_operator(hv), inner_tol);
      }
    }
    SupportingPoint p;
    p.v = v;
    p.x_v = top->vector;
    p.y_v = rho_map(problem, p.x_v);
    p.lambda_v = v.dot(p.y_v);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<UnitVector> supporting_starts(const Problem& problem, std::size_t count,
                                          std::uint64_t seed, Index dense_max_n) {
  const auto dirs = direction_grid(problem.m(), count, seed);
  const auto pts = supporting_points(problem, dirs, 1e-12, dense_max_n);
  std::vector<UnitVector> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(p.x_v);
  return out;
}

UnitVector greedy_init(const Problem& problem, std::size_t num_samples, std::uint64_t seed,
                       Index dense_max_n) {
  if (num_samples == 0) throw ValidationError("greedy initialization needs at least one sample");
  const auto starts = supporting_starts(problem, num_samples, seed, dense_max_n);
  std::size_t best = 0;
  double best_f = objective(problem, starts[0]);
  for (std::size_t j = 1; j < starts.size(); ++j) {
    const double f = objective(problem, starts[j]);
    if (f > best_f) {
      best_f = f;
      best = j;
    }
  }
  return starts[best];
}

std::vector<Cluster> cluster_objectives(std::span<const SolveReport> reports, double gap) {
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < reports.size(); ++j) {
    if (reports[j].converged) idx.push_back(j);
  }
  std::vector<double> f(reports.size(), 0.0);
  for (std::size_t j : idx) f[j] = reports[j].objective_history.back();
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return f[a] > f[b]; });

  std::vector<Cluster> out;
  for (std::size_t pos = 0; pos < idx.size(); ++pos) {
    const std::size_t j = idx[pos];
    if (out.empty() || f[idx[pos - 1]] - f[j] > gap) {
      out.push_back(Cluster{f[j], 0, j, {}});
    }
    out.back().members.push_back(j);
    ++out.back().count;
  }
  for (auto& c : out) std::sort(c.members.begin(), c.members.end());
  return out;
}

MultistartResult multistart(const Problem& problem, std::span<const UnitVector> starts,
                            const SolveOptions& opts, unsigned jobs) {
  MultistartResult result;
  result.reports.resize(starts.size());
  const unsigned workers =
      std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(starts.size())));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::size_t failure_at = starts.size();
  std::mutex mu;
  auto work = [&] {
    for (;;) {
      const std::size_t j = next.fetch_add(1);
      if (j >= starts.size()) return;
      try {
        result.reports[j] = solve(problem, starts[j], opts);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(mu);
        // Keep the lowest index so the reported error does not depend on scheduling.
        if (j < failure_at) {
          failure_at = j;
          failure = std::current_exception();
        }
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  result.clusters = cluster_objectives(result.reports);
  if (!result.clusters.empty()) result.best = result.clusters.front().representative;
  return result;
}

}  // namespace mnepv
