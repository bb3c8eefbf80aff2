// Copyright The mnepv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MNEPV_RNG_HPP
#define MNEPV_RNG_HPP

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace mnepv {

/// Seeded generator with a portable output stream.
///
/// The bit source is std::mt19937_64, whose sequence is fixed by the C++
/// standard. Uniform and normal variates are derived here (53-bit mantissa
/// fill and Box-Muller) instead of through the <random> distributions, whose
/// algorithms are implementation-defined. The same seed therefore gives the
/// same numbers with any conforming standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on [lo, hi].
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(engine_() % span);
  }

  /// Standard normal variate.
  double normal();

  Eigen::VectorXd normal_vector(Eigen::Index n);

  /// Uniformly distributed point on the unit sphere in R^n.
  Eigen::VectorXd unit_vector(Eigen::Index n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mnepv

#endif  // MNEPV_RNG_HPP
