// Copyright The mnepv Authors
// SPDX-License-Identifier: Apache-2.0

#include "mnepv/report.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "mnepv/errors.hpp"
#include "text.hpp"

namespace mnepv::io {

namespace {

using Json = nlohmann::ordered_json;
using PK = ParseError::Kind;

// Non-finite doubles travel as the strings "inf", "-inf", "nan".
Json num(double v) {
  if (std::isfinite(v)) return v;
  return detail::shortest(v);
}

double num(const Json& j, const char* key) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ParseError(PK::BadToken, 0, std::string("field '") + key + "' is not a number");
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(PK::MalformedHeader, 0, std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

template <class E>
E enum_from(const std::string& s, std::initializer_list<E> all, const char* key) {
  for (E e : all) {
    if (to_string(e) == s) return e;
  }
  throw ParseError(PK::BadToken, 0, std::string("unknown value '") + s + "' for '" + key + "'");
}

AccelStatus accel_from(const std::string& s) {
  return enum_from(s,
                   {AccelStatus::NotAttempted, AccelStatus::AcceptedIncreasedF,
                    AccelStatus::RejectedDecreasedF, AccelStatus::SolveFailed},
                   "accel");
}

Termination termination_from(const std::string& s) {
  return enum_from(s,
                   {Termination::Converged, Termination::MaxIterations, Termination::Stagnated,
                    Termination::ZeroOperator, Termination::KernelFailure},
                   "termination");
}

Stability stability_from(const std::string& s) {
  return enum_from(s,
                   {Stability::Stable, Stability::WeaklyStable, Stability::NonStable,
                    Stability::Indeterminate},
                   "classification");
}

}  // namespace

RunArtifact make_artifact(const RunMetadata& meta, const SolveReport& report) {
  RunArtifact a;
  a.metadata = meta;
  const std::size_t len = report.objective_history.size();
  for (std::size_t k = 0; k < len; ++k) {
    IterationRecord r;
    r.k = static_cast<int>(k);
    r.objective = report.objective_history[k];
    r.residual = k < report.residual_history.size() ? report.residual_history[k] : 0.0;
    r.lambda = k < report.lambda_history.size() ? report.lambda_history[k] : 0.0;
    r.accel = k < report.accel_log.size() ? report.accel_log[k] : AccelStatus::NotAttempted;
    a.iterations.push_back(r);
  }
  a.x_star = report.x_star.vec();
  a.lambda_star = report.lambda_star;
  a.converged = report.converged;
  a.termination = report.termination;
  return a;
}

void add_clusters(RunArtifact& artifact, std::span<const Cluster> clusters) {
  for (const auto& c : clusters) artifact.clusters.push_back({c.objective, c.count});
}

std::string to_json(const RunArtifact& a) {
  Json j;
  j["schema"] = kReportSchema;
  Json meta;
  meta["kind"] = a.metadata.kind;
  meta["n"] = a.metadata.n;
  meta["m"] = a.metadata.m;
  meta["seed"] = a.metadata.seed;
  meta["tol"] = num(a.metadata.tol);
  meta["tol_acc"] = num(a.metadata.tol_acc);
  meta["max_iter"] = a.metadata.max_iter;
  meta["starts"] = a.metadata.starts;
  meta["start_policy"] = a.metadata.start_policy;
  meta["fns"] = a.metadata.fns;
  j["metadata"] = std::move(meta);

  j["converged"] = a.converged;
  j["termination"] = std::string(to_string(a.termination));
  j["lambda_star"] = num(a.lambda_star);
  Json xs = Json::array();
  for (Index i = 0; i < a.x_star.size(); ++i) {
    xs.push_back(Json::array({num(a.x_star(i).real()), num(a.x_star(i).imag())}));
  }
  j["x_star"] = std::move(xs);

  Json its = Json::array();
  for (const auto& r : a.iterations) {
    its.push_back({{"k", r.k},
                   {"objective", num(r.objective)},
                   {"residual", num(r.residual)},
                   {"lambda", num(r.lambda)},
                   {"accel", std::string(to_string(r.accel))}});
  }
  j["iterations"] = std::move(its);

  if (a.stability) {
    const auto& s = *a.stability;
    Json st{{"rho_L", num(s.rho_L)},
            {"classification", std::string(to_string(s.classification))},
            {"eigengap", num(s.eigengap)},
            {"lambda_star", num(s.lambda_star)}};
    st["phi_max"] = s.phi_max ? num(*s.phi_max) : Json(nullptr);
    j["stability"] = std::move(st);
  } else {
    j["stability"] = nullptr;
  }

  Json cl = Json::array();
  for (const auto& c : a.clusters) cl.push_back({{"objective", num(c.objective)}, {"count", c.count}});
  j["clusters"] = std::move(cl);

  Json vals = Json::array();
  for (const auto& [name, v] : a.values) vals.push_back({{"name", name}, {"value", num(v)}});
  j["values"] = std::move(vals);
  return j.dump(2);
}

RunArtifact from_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(PK::BadToken, 0, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("schema") || j["schema"] != kReportSchema) {
    throw ParseError(PK::UnsupportedFormat, 0, std::string("expected schema ") + kReportSchema);
  }
  RunArtifact a;
  try {
    const Json& meta = field(j, "metadata");
    a.metadata.kind = field(meta, "kind").get<std::string>();
    a.metadata.n = field(meta, "n").get<Index>();
    a.metadata.m = field(meta, "m").get<Index>();
    a.metadata.seed = field(meta, "seed").get<std::uint64_t>();
    a.metadata.tol = num(field(meta, "tol"), "tol");
    a.metadata.tol_acc = num(field(meta, "tol_acc"), "tol_acc");
    a.metadata.max_iter = field(meta, "max_iter").get<int>();
    a.metadata.starts = field(meta, "starts").get<std::size_t>();
    a.metadata.start_policy = field(meta, "start_policy").get<std::string>();
    a.metadata.fns = field(meta, "fns").get<std::vector<std::string>>();

    a.converged = field(j, "converged").get<bool>();
    a.termination = termination_from(field(j, "termination").get<std::string>());
    a.lambda_star = num(field(j, "lambda_star"), "lambda_star");
    const Json& x = field(j, "x_star");
    if (!x.is_array()) throw ParseError(PK::BadToken, 0, "x_star must be an array of [re, im] pairs");
    a.x_star.resize(static_cast<Index>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!x[i].is_array() || x[i].size() != 2) {
        throw ParseError(PK::BadToken, 0, "x_star entries must be [re, im] pairs");
      }
      a.x_star(static_cast<Index>(i)) = Complex(num(x[i][0], "x_star"), num(x[i][1], "x_star"));
    }

    for (const Json& r : field(j, "iterations")) {
      IterationRecord rec;
      rec.k = field(r, "k").get<int>();
      rec.objective = num(field(r, "objective"), "objective");
      rec.residual = num(field(r, "residual"), "residual");
      rec.lambda = num(field(r, "lambda"), "lambda");
      rec.accel = accel_from(field(r, "accel").get<std::string>());
      a.iterations.push_back(rec);
    }

    const Json& st = field(j, "stability");
    if (!st.is_null()) {
      StabilityReport s;
      s.rho_L = num(field(st, "rho_L"), "rho_L");
      s.classification = stability_from(field(st, "classification").get<std::string>());
      s.eigengap = num(field(st, "eigengap"), "eigengap");
      s.lambda_star = num(field(st, "lambda_star"), "lambda_star");
      const Json& pm = field(st, "phi_max");
      if (!pm.is_null()) s.phi_max = num(pm, "phi_max");
      a.stability = s;
    }

    for (const Json& c : field(j, "clusters")) {
      a.clusters.push_back({num(field(c, "objective"), "objective"), field(c, "count").get<std::size_t>()});
    }
    for (const Json& v : field(j, "values")) {
      a.values.emplace_back(field(v, "name").get<std::string>(), num(field(v, "value"), "value"));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(PK::BadToken, 0, std::string("malformed report: ") + e.what());
  }
  return a;
}

void write_history_csv(std::ostream& out, const RunArtifact& a) {
  out << "k,objective,residual,lambda,accel\n";
  for (const auto& r : a.iterations) {
    out << r.k << ',' << detail::shortest(r.objective) << ',' << detail::shortest(r.residual) << ','
        << detail::shortest(r.lambda) << ',' << to_string(r.accel) << '\n';
  }
}

void write_report(const RunArtifact& artifact, const std::filesystem::path& path,
                  ReportFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  if (format == ReportFormat::Json) {
    out << to_json(artifact) << '\n';
  } else {
    write_history_csv(out, artifact);
  }
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace mnepv::io
