// Copyright The mnepv Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mnepv/mnepv.hpp"

namespace mnepv::cli {

namespace {

enum class Level { Error = 0, Info = 1, Debug = 2 };

class Log {
 public:
  explicit Log(std::ostream& err) : err_(err) {
    if (const char* env = std::getenv("MNEPV_LOG")) {
      const std::string v = env;
      if (v == "info") level_ = Level::Info;
      else if (v == "debug") level_ = Level::Debug;
    }
  }
  void info(const std::string& msg) const { emit(Level::Info, "info", msg); }
  void debug(const std::string& msg) const { emit(Level::Debug, "debug", msg); }
  bool debugging() const { return level_ >= Level::Debug; }

 private:
  void emit(Level at, const char* tag, const std::string& msg) const {
    if (level_ >= at) err_ << tag << ": " << msg << '\n';
  }
  std::ostream& err_;
  Level level_ = Level::Error;
};

struct Common {
  double tol = 1e-13;
  double tol_acc = 0.1;
  int max_iter = 500;
  std::size_t starts = 100;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
  unsigned jobs = 1;
  std::string start;
};

struct Inputs {
  std::vector<std::string> mtx;
  std::vector<std::string> fns;
  std::string tensor;
  std::string x0;
  std::string x;
  std::string grid = "100";
};

void add_common(CLI::App* sub, Common& c, std::size_t default_starts) {
  c.starts = default_starts;
  sub->add_option("--tol", c.tol, "Residual tolerance")->capture_default_str();
  sub->add_option("--tol-acc", c.tol_acc, "Residual below which acceleration is tried (0 disables)")
      ->capture_default_str();
  sub->add_option("--max-iter", c.max_iter, "Iteration limit per run")->capture_default_str();
  sub->add_option("--seed", c.seed, "Seed for sampled directions and starts")->capture_default_str();
  sub->add_option("--out", c.out, "Write the run artifact to this path");
  sub->add_option("--format", c.format, "Artifact format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  sub->add_option("--jobs", c.jobs, "Worker threads for multistart")->capture_default_str();
}

void add_starts(CLI::App* sub, Common& c, const char* what) {
  sub->add_option("--starts", c.starts, what)->capture_default_str();
}

SolveOptions solve_options(const Common& c) {
  if (!(c.tol > 0.0)) throw ValidationError("--tol must be positive");
  if (!(c.tol_acc >= 0.0)) throw ValidationError("--tol-acc must be non-negative");
  if (c.max_iter <= 0) throw ValidationError("--max-iter must be positive");
  if (c.jobs == 0) throw ValidationError("--jobs must be positive");
  SolveOptions o;
  o.tol = c.tol;
  o.tol_acc = c.tol_acc;
  o.max_iter = c.max_iter;
  return o;
}

io::RunMetadata metadata(const std::string& kind, const Problem& p, const Common& c,
                         std::size_t starts, const std::string& policy) {
  io::RunMetadata m;
  m.kind = kind;
  m.n = p.n();
  m.m = p.m();
  m.seed = c.seed;
  m.tol = c.tol;
  m.tol_acc = c.tol_acc;
  m.max_iter = c.max_iter;
  m.starts = starts;
  m.start_policy = policy;
  for (const auto& f : p.fns()) m.fns.push_back(f.describe());
  return m;
}

std::vector<HermitianMatrix> load_hermitian(const std::vector<std::string>& paths, const Log& log) {
  std::vector<HermitianMatrix> out;
  for (const auto& path : paths) {
    out.push_back(io::read_matrix_market(path).hermitian());
    log.info("read " + path + " (n = " + std::to_string(out.back().n()) + ")");
  }
  return out;
}

std::vector<MonotoneFn> parse_fns(const std::vector<std::string>& specs, std::size_t m) {
  if (specs.empty()) return std::vector<MonotoneFn>(m, MonotoneFn::identity());
  if (specs.size() == 1) return std::vector<MonotoneFn>(m, MonotoneFn::parse(specs[0]));
  if (specs.size() != m) {
    throw ValidationError("got " + std::to_string(specs.size()) + " --fn values for " +
                          std::to_string(m) + " matrices");
  }
  std::vector<MonotoneFn> out;
  for (const auto& s : specs) out.push_back(MonotoneFn::parse(s));
  return out;
}

// One entry per line: "re" or "re im"; '#' and '%' start comments.
UnitVector read_vector(const std::string& path, Index n) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::vector<Complex> vals;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#' || line[first] == '%') continue;
    std::istringstream ss(line);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.size() > 2) throw ParseError(ParseError::Kind::BadToken, lineno, "expected 're [im]'");
    double parts[2] = {0.0, 0.0};
    for (std::size_t i = 0; i < tok.size(); ++i) {
      std::size_t used = 0;
      try {
        parts[i] = std::stod(tok[i], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok[i].size()) {
        throw ParseError(ParseError::Kind::BadToken, lineno, "bad number '" + tok[i] + "'");
      }
    }
    vals.emplace_back(parts[0], parts[1]);
  }
  if (static_cast<Index>(vals.size()) != n) {
    throw DimensionError("vector file has " + std::to_string(vals.size()) + " entries, expected " +
                         std::to_string(n));
  }
  return UnitVector(Eigen::Map<Vector>(vals.data(), n));
}

void emit(const io::RunArtifact& a, const Common& c, const Log& log) {
  if (c.out.empty()) return;
  io::write_report(a, c.out, c.format == "csv" ? io::ReportFormat::Csv : io::ReportFormat::Json);
  log.info("wrote " + c.out);
}

std::string fmt(double v) { return io::format_double(v); }

void log_history(const SolveReport& r, const Log& log) {
  if (!log.debugging()) return;
  for (std::size_t k = 0; k < r.objective_history.size(); ++k) {
    log.debug("k=" + std::to_string(k) + " F=" + fmt(r.objective_history[k]) +
              " res=" + fmt(r.residual_history[k]) + " accel=" + std::string(to_string(r.accel_log[k])));
  }
}

void print_clusters(std::ostream& out, std::span<const Cluster> clusters) {
  out << "clusters: " << clusters.size() << '\n';
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    out << "  " << i + 1 << ": objective " << fmt(clusters[i].objective) << ", runs "
        << clusters[i].count << '\n';
  }
}

std::size_t converged_runs(const MultistartResult& r) {
  std::size_t c = 0;
  for (const auto& rep : r.reports) c += rep.converged ? 1 : 0;
  return c;
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_solve(const Inputs& in, const Common& c, std::ostream& out, const Log& log) {
  if (in.mtx.empty()) throw ValidationError("solve needs at least one --mtx");
  auto mats = load_hermitian(in.mtx, log);
  const auto fns = parse_fns(in.fns, mats.size());
  const Problem problem(std::move(mats), fns);
  const SolveOptions opts = solve_options(c);

  const std::string policy = c.start.empty() ? "greedy" : c.start;
  UnitVector x0;
  if (policy == "greedy") {
    x0 = greedy_init(problem, c.starts, c.seed);
  } else if (policy == "eig-a1") {
    x0 = largest_eigpair(problem.matrix(0)).vector;
  } else {
    if (in.x0.empty()) throw ValidationError("--start file needs --x0 <path>");
    x0 = read_vector(in.x0, problem.n());
  }
  log.info("start policy " + policy);

  const SolveReport r = solve(problem, x0, opts);
  log_history(r, log);
  io::RunArtifact a = make_artifact(metadata("solve", problem, c, 1, policy), r);
  if (r.converged) {
    try {
      a.stability = analyze_stability(problem, r.x_star);
    } catch (const ValidationError& e) {
      log.info(std::string("stability skipped: ") + e.what());
    }
  }
  a.values = {{"objective", r.objective_history.back()}, {"residual", residual(problem, r.x_star)}};
  emit(a, c, log);

  out << "converged: " << (r.converged ? "yes" : "no") << '\n';
  out << "termination: " << to_string(r.termination) << '\n';
  out << "iterations: " << r.iterations << '\n';
  out << "lambda: " << fmt(r.lambda_star) << '\n';
  out << "objective: " << fmt(r.objective_history.back()) << '\n';
  if (a.stability) out << "stability: " << to_string(a.stability->classification) << '\n';
  return r.converged ? kExitOk : kExitNotConverged;
}

int finish_multistart(const std::string& kind, const Problem& problem, const Common& c,
                      const std::string& policy, const MultistartResult& runs, io::RunArtifact& a,
                      std::ostream& out, const Log& log) {
  const std::size_t pick = runs.best.value_or(0);
  a = make_artifact(metadata(kind, problem, c, runs.reports.size(), policy), runs.reports[pick]);
  io::add_clusters(a, runs.clusters);
  out << "runs: " << runs.reports.size() << ", converged: " << converged_runs(runs) << '\n';
  print_clusters(out, runs.clusters);
  log_history(runs.reports[pick], log);
  return runs.best ? kExitOk : kExitNotConverged;
}

int cmd_radius(const std::string& kind, const Inputs& in, const Common& c, std::ostream& out,
               const Log& log) {
  std::vector<HermitianMatrix> mats;
  if (kind == "numrad") {
    if (in.mtx.size() != 1) throw ValidationError("numrad needs exactly one --mtx");
    const Matrix b = io::read_matrix_market(in.mtx[0]).values;
    if (b.rows() != b.cols()) throw DimensionError("B must be square");
    mats = numrad_problem(b).matrices();
  } else {
    if (in.mtx.empty()) throw ValidationError("jnumrad needs at least one --mtx");
    mats = load_hermitian(in.mtx, log);
  }
  const Problem problem = quartic_problem(std::move(mats));
  const SolveOptions opts = solve_options(c);
  const auto starts = supporting_starts(problem, c.starts, c.seed);
  const MultistartResult runs = multistart(problem, starts, opts, c.jobs);

  io::RunArtifact a;
  const int code = finish_multistart(kind, problem, c, "supporting", runs, a, out, log);
  if (runs.best) {
    const double r = rho_map(problem, runs.reports[*runs.best].x_star).norm();
    a.values = {{"r", r}};
    out << "r: " << fmt(r) << '\n';
  }
  emit(a, c, log);
  return code;
}

int cmd_tensor(const Inputs& in, const Common& c, std::ostream& out, const Log& log) {
  if (in.tensor.empty()) throw ValidationError("tensor needs --tensor <path>");
  const TensorPS3 t = io::read_tensor_coo(in.tensor);
  if (!t.input_was_symmetric()) log.info("input slices were symmetrized");
  const Problem problem = tensor_problem(t);
  const SolveOptions opts = solve_options(c);
  const auto starts = nonnegative_starts(t.n(), c.starts, c.seed);
  const MultistartResult runs = multistart(problem, starts, opts, c.jobs);

  io::RunArtifact a;
  const int code = finish_multistart("tensor", problem, c, "nonnegative", runs, a, out, log);
  if (runs.best) {
    const RankOneResult r = rank_one_from(t, runs.reports[*runs.best].x_star);
    a.values = {{"mu", r.mu}, {"lambda", r.lambda}, {"fit", r.fit}, {"objective", r.objective}};
    for (Index k = 0; k < r.z.size(); ++k) a.values.emplace_back("z" + std::to_string(k + 1), r.z(k));
    out << "mu: " << fmt(r.mu) << '\n' << "lambda: " << fmt(r.lambda) << '\n' << "fit: " << fmt(r.fit) << '\n';
  }
  emit(a, c, log);
  return code;
}

int cmd_dhdae(const Inputs& in, const Common& c, std::ostream& out, const Log& log) {
  if (in.mtx.size() < 2) throw ValidationError("dhdae needs --mtx J followed by at least one --mtx B");
  const RealMatrix j = io::read_matrix_market(in.mtx[0]).real();
  std::vector<RealMatrix> b;
  for (std::size_t i = 1; i < in.mtx.size(); ++i) b.push_back(io::read_matrix_market(in.mtx[i]).real());

  DhdaeOptions d;
  const std::string policy = c.start.empty() ? "eig-a1" : c.start;
  if (policy == "greedy") d.start = DhdaeStart::Multistart;
  else if (policy != "eig-a1") throw ValidationError("dhdae supports --start eig-a1 or greedy");
  d.num_starts = c.starts;
  d.seed = c.seed;
  d.jobs = c.jobs;
  const DhdaeBound bound = dhdae_distance(j, b, solve_options(c), d);
  const Problem problem = dhdae_problem(j, b);

  io::RunArtifact a = make_artifact(metadata("dhdae", problem, c, bound.runs.reports.size(), policy), bound.report);
  io::add_clusters(a, bound.runs.clusters);
  a.values = {{"d_est", bound.d_est}, {"d_start", bound.d_start}, {"delta_m", bound.delta_m},
              {"f_star", bound.f_star}, {"f_start", bound.f_start}};
  emit(a, c, log);
  log_history(bound.report, log);

  out << "converged: " << (bound.report.converged ? "yes" : "no") << '\n';
  out << "d_est: " << fmt(bound.d_est) << '\n';
  out << "d_start: " << fmt(bound.d_start) << '\n';
  out << "delta_m: " << fmt(bound.delta_m) << '\n';
  out << "d_est <= delta_m: " << (bound.d_est <= bound.delta_m ? "yes" : "no") << '\n';
  return bound.report.converged ? kExitOk : kExitNotConverged;
}

int cmd_stability(const Inputs& in, const Common& c, std::ostream& out, const Log& log) {
  if (in.mtx.empty()) throw ValidationError("stability needs at least one --mtx");
  if (in.x.empty()) throw ValidationError("stability needs --x <path>");
  auto mats = load_hermitian(in.mtx, log);
  const auto fns = parse_fns(in.fns, mats.size());
  const Problem problem(std::move(mats), fns);
  const UnitVector x = read_vector(in.x, problem.n());
  const StabilityReport s = analyze_stability(problem, x);

  io::RunArtifact a;
  a.metadata = metadata("stability", problem, c, 0, "file");
  a.x_star = x.vec();
  a.lambda_star = s.lambda_star;
  a.converged = true;
  a.termination = Termination::Converged;
  a.stability = s;
  a.values = {{"residual", residual(problem, x)}};
  emit(a, c, log);

  out << "classification: " << to_string(s.classification) << '\n';
  out << "rho_L: " << fmt(s.rho_L) << '\n';
  out << "eigengap: " << fmt(s.eigengap) << '\n';
  out << "lambda: " << fmt(s.lambda_star) << '\n';
  out << "residual: " << fmt(a.values[0].second) << '\n';
  if (s.phi_max) out << "phi_max: " << fmt(*s.phi_max) << '\n';
  return kExitOk;
}

int cmd_boundary(const Inputs& in, const Common& c, std::ostream& out, const Log& log) {
  if (in.mtx.empty()) throw ValidationError("boundary needs at least one --mtx");
  auto mats = load_hermitian(in.mtx, log);
  const std::size_t m = mats.size();
  const Problem problem(std::move(mats), std::vector<MonotoneFn>(m, MonotoneFn::identity()));

  std::vector<RealVector> dirs;
  const auto x = in.grid.find('x');
  auto count = [&](const std::string& s) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty() || v == 0) throw ValidationError("bad --grid value '" + in.grid + "'");
    return static_cast<std::size_t>(v);
  };
  if (x != std::string::npos) {
    if (m != 3) throw ValidationError("--grid AxB needs exactly three matrices");
    dirs = spherical_grid(count(in.grid.substr(0, x)), count(in.grid.substr(x + 1)));
  } else {
    dirs = direction_grid(static_cast<Index>(m), count(in.grid), c.seed);
  }
  const auto pts = supporting_points(problem, dirs);
  if (c.out.empty()) {
    io::write_boundary(out, pts);
  } else {
    io::write_boundary(c.out, pts);
    log.info("wrote " + c.out);
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  const Log log(err);
  CLI::App app{"Monotone nonlinear eigenvector problems solved by (accelerated) SCF", "mnepv"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "mnepv 0.1.0");

  Inputs in;
  // One option set per subcommand so per-command defaults do not collide.
  std::array<Common, 7> cs;

  auto* solve_cmd = app.add_subcommand("solve", "Solve H(x)x = lambda x from one start");
  solve_cmd->add_option("--mtx", in.mtx, "Hermitian coefficient matrix (repeatable)")->required();
  solve_cmd->add_option("--fn", in.fns, "Function spec const:c | id | affine:a,b (repeatable)");
  solve_cmd->add_option("--start", cs[0].start, "Start policy")
      ->check(CLI::IsMember({"greedy", "eig-a1", "file"}));
  solve_cmd->add_option("--x0", in.x0, "Start vector file for --start file");
  add_common(solve_cmd, cs[0], 100);
  add_starts(solve_cmd, cs[0], "Directions sampled by the greedy start");

  auto* numrad_cmd = app.add_subcommand("numrad", "Numerical radius of a square matrix");
  numrad_cmd->add_option("--mtx", in.mtx, "Matrix B (Matrix Market)")->required();
  add_common(numrad_cmd, cs[1], 100);
  add_starts(numrad_cmd, cs[1], "Supporting-point starts");

  auto* jnumrad_cmd = app.add_subcommand("jnumrad", "Joint numerical radius of Hermitian matrices");
  jnumrad_cmd->add_option("--mtx", in.mtx, "Hermitian matrix (repeatable)")->required();
  add_common(jnumrad_cmd, cs[2], 100);
  add_starts(jnumrad_cmd, cs[2], "Supporting-point starts");

  auto* tensor_cmd = app.add_subcommand("tensor", "Best rank-one approximation of a partial-symmetric tensor");
  tensor_cmd->add_option("--tensor", in.tensor, "Tensor COO file")->required();
  add_common(tensor_cmd, cs[3], 10);
  add_starts(tensor_cmd, cs[3], "Non-negative random starts");

  auto* dhdae_cmd = app.add_subcommand("dhdae", "Distance-to-singularity bound for a dHDAE");
  dhdae_cmd->add_option("--mtx", in.mtx, "J first, then each B_i (repeatable)")->required();
  dhdae_cmd->add_option("--start", cs[4].start, "Start policy")->check(CLI::IsMember({"eig-a1", "greedy"}));
  add_common(dhdae_cmd, cs[4], 100);
  add_starts(dhdae_cmd, cs[4], "Extra supporting-point starts for --start greedy");

  auto* stab_cmd = app.add_subcommand("stability", "Classify a solution vector");
  stab_cmd->add_option("--mtx", in.mtx, "Hermitian coefficient matrix (repeatable)")->required();
  stab_cmd->add_option("--fn", in.fns, "Function spec (repeatable)");
  stab_cmd->add_option("--x", in.x, "Solution vector file, one 're [im]' per line")->required();
  add_common(stab_cmd, cs[5], 0);

  auto* bnd_cmd = app.add_subcommand("boundary", "Supporting-point trace of the joint numerical range");
  bnd_cmd->add_option("--mtx", in.mtx, "Hermitian matrix (repeatable)")->required();
  bnd_cmd->add_option("--grid", in.grid, "Direction count N, or AxB (eta x theta) for three matrices")
      ->capture_default_str();
  add_common(bnd_cmd, cs[6], 0);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(in, cs[0], out, log);
    if (numrad_cmd->parsed()) return cmd_radius("numrad", in, cs[1], out, log);
    if (jnumrad_cmd->parsed()) return cmd_radius("jnumrad", in, cs[2], out, log);
    if (tensor_cmd->parsed()) return cmd_tensor(in, cs[3], out, log);
    if (dhdae_cmd->parsed()) return cmd_dhdae(in, cs[4], out, log);
    if (stab_cmd->parsed()) return cmd_stability(in, cs[5], out, log);
    if (bnd_cmd->parsed()) return cmd_boundary(in, cs[6], out, log);
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNotConverged;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace mnepv::cli
