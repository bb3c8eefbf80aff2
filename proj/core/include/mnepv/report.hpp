// Copyright The mnepv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MNEPV_REPORT_HPP
#define MNEPV_REPORT_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mnepv/sampling.hpp"
#include "mnepv/solver.hpp"
#include "mnepv/stability.hpp"

namespace mnepv::io {

inline constexpr const char* kReportSchema = "mnepv-report/1";

struct RunMetadata {
  std::string kind;
  Index n = 0;
  Index m = 0;
  std::uint64_t seed = 0;
  double tol = 1e-13;
  double tol_acc = 0.1;
  int max_iter = 500;
  std::size_t starts = 1;
  std::string start_policy;
  std::vector<std::string> fns;

  friend bool operator==(const RunMetadata&, const RunMetadata&) = default;
};

struct IterationRecord {
  int k = 0;
  double objective = 0.0;
  double residual = 0.0;
  double lambda = 0.0;
  AccelStatus accel = AccelStatus::NotAttempted;

  friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

struct ClusterSummary {
  double objective = 0.0;
  std::size_t count = 0;

  friend bool operator==(const ClusterSummary&, const ClusterSummary&) = default;
};

/// Everything a run leaves behind: metadata, the per-iteration history of
/// the reported run, its final solution, and application scalars.
struct RunArtifact {
  RunMetadata metadata;
  std::vector<IterationRecord> iterations;
  Vector x_star;
  double lambda_star = 0.0;
  bool converged = false;
  Termination termination = Termination::MaxIterations;
  std::optional<StabilityReport> stability;
  std::vector<ClusterSummary> clusters;
  /// Named scalars in insertion order (e.g. "r", "d_est", "mu").
  std::vector<std::pair<std::string, double>> values;

  friend bool operator==(const RunArtifact&, const RunArtifact&) = default;
};

/// Fills history, solution and termination from a solve report.
RunArtifact make_artifact(const RunMetadata& meta, const SolveReport& report);
void add_clusters(RunArtifact& artifact, std::span<const Cluster> clusters);

enum class ReportFormat { Json, Csv };

std::string to_json(const RunArtifact& artifact);
/// Throws ParseError on malformed documents or a schema mismatch.
RunArtifact from_json(const std::string& text);

/// One header row "k,objective,residual,lambda,accel" then one row per
/// iteration.
void write_history_csv(std::ostream& out, const RunArtifact& artifact);

void write_report(const RunArtifact& artifact, const std::filesystem::path& path,
                  ReportFormat format);

}  // namespace mnepv::io

#endif  // MNEPV_REPORT_HPP
