// Command-line front end: graph generation, single-instance pipelines,
// Monte-Carlo experiment grids, and inequality audits. All output is CSV
// with a versioned "# schema=" comment on the first line.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sbm/audit.hpp"
#include "sbm/io.hpp"
#include "sbm/linalg.hpp"
#include "sbm/model.hpp"
#include "sbm/recovery.hpp"
#include "sbm/rng.hpp"
#include "sbm/solver.hpp"

using json = nlohmann::json;
using namespace sbm;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitValidation = 2;
constexpr int kExitUsage = 64;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

ModelSpec model_from_json(const json& j) {
  const std::string variant = j.value("variant", "classical");
  if (variant == "classical")
    return ModelSpec::classical(j.at("n").get<int>(), j.at("p").get<double>(),
                                j.at("q").get<double>());
  if (variant == "balanced")
    return ModelSpec::balanced(j.at("K").get<int>(), j.at("s").get<int>(),
                               j.at("p").get<double>(), j.at("q").get<double>());
  if (variant == "general") {
    // labels plus thresholds; the probability matrix is p within / q across
    const std::vector<int> labels = j.at("labels").get<std::vector<int>>();
    const double p = j.at("p").get<double>();
    const double q = j.at("q").get<double>();
    CommunityAssignment asg(labels);
    const int n = asg.size();
    Eigen::MatrixXd prob(n, n);
    for (int i = 0; i < n; ++i)
      for (int jj = 0; jj < n; ++jj)
        prob(i, jj) = i == jj ? 1.0 : (asg.same_community(i, jj) ? p : q);
    return ModelSpec::general(prob, asg, p, q);
  }
  throw std::invalid_argument("model spec: unknown variant '" + variant + "'");
}

json load_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  json j;
  is >> j;
  return j;
}

int default_threads() {
  if (const char* env = std::getenv("SBM_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

// ---------------------------------------------------------------- generate

int cmd_generate(const std::string& spec_path, const std::string& out_prefix,
                 std::uint64_t seed) {
  const ModelSpec spec = model_from_json(load_json_file(spec_path));
  spec.validate();
  const AdjacencyMatrix a = sample_graph(spec, seed);
  write_matrix_market_file(out_prefix + ".mtx", a);
  write_assignment_file(out_prefix + ".labels", spec.truth_assignment());
  const ModelStatistics stats = model_statistics(spec);
  std::cout << "n=" << spec.n << " pbar=" << fmt(stats.pbar)
            << " g=" << fmt(stats.g) << " a=" << fmt(stats.a)
            << " b=" << fmt(stats.b) << '\n';
  std::cout << "wrote " << out_prefix << ".mtx and " << out_prefix << ".labels\n";
  return kExitOk;
}

// ---------------------------------------------------------------- pipeline

struct PipelineRow {
  std::string sdp;
  int n = 0, K = 0;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  SdpSolution sol;
  bool has_truth = false;
  double mis = 0.0, frob_sq = 0.0, l1 = 0.0, proj_error = 0.0;
};

void write_trial_header(std::ostream& os) {
  os << "# schema=trial.v1\n";
  os << "sdp,n,K,lambda,seed,iterations,converged,objective,primal_residual,"
        "dual_residual,mis,frob_sq_error,l1_error,proj_error\n";
}

void write_trial_row(std::ostream& os, const PipelineRow& r) {
  os << r.sdp << ',' << r.n << ',' << r.K << ',' << fmt(r.lambda) << ','
     << r.seed << ',' << r.sol.iterations << ',' << (r.sol.converged ? 1 : 0)
     << ',' << fmt(r.sol.objective) << ',' << fmt(r.sol.primal_residual) << ','
     << fmt(r.sol.dual_residual) << ',';
  if (r.has_truth)
    os << fmt(r.mis) << ',' << fmt(r.frob_sq) << ',' << fmt(r.l1) << ','
       << fmt(r.proj_error);
  else
    os << ",,,";
  os << '\n';
}

int cmd_pipeline(const std::string& graph_path, const std::string& sdp,
                 std::optional<double> lambda_override,
                 const std::string& truth_path, int k_opt, RankMode rank_mode,
                 std::uint64_t seed, const SolverConfig& cfg,
                 const std::string& out_path) {
  const AdjacencyMatrix a = read_matrix_market_file(graph_path);
  const int n = static_cast<int>(a.rows());
  std::optional<CommunityAssignment> truth;
  if (!truth_path.empty()) truth = read_assignment_file(truth_path);

  PipelineRow row;
  row.sdp = sdp;
  row.n = n;
  row.seed = seed;

  FeasibleSet set;
  Eigen::MatrixXd b;
  const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(n, n);
  if (sdp == "eq5") {
    set = FeasibleSet::grothendieck_psd();
    row.lambda = estimate_lambda(a);
    b = a - row.lambda * ones;
    row.K = 2;
  } else if (sdp == "eq8") {
    if (lambda_override)
      row.lambda = *lambda_override;
    else if (truth)
      row.lambda = lambda_cluster_count(*truth);
    else
      throw std::invalid_argument("eq8 needs --lambda or --truth");
    set = FeasibleSet::sum_constrained(row.lambda);
    b = a;
    row.K = truth ? truth->community_count() : (k_opt > 0 ? k_opt : 2);
  } else if (sdp == "eq24") {
    row.K = k_opt > 0 ? k_opt : (truth ? truth->community_count() : 0);
    if (row.K < 2) throw std::invalid_argument("eq24 needs --K or --truth");
    set = FeasibleSet::k_community(row.K);
    row.lambda = estimate_lambda(a);
    b = a - row.lambda * ones;
  } else {
    throw CLI::ValidationError("--sdp must be one of eq5, eq8, eq24");
  }

  row.sol = solve(b, set, cfg);

  CommunityAssignment labels;
  if (row.K == 2) {
    labels = round_leading_eigenvector(row.sol.Z).second;
  } else {
    const Eigen::MatrixXd phat = spectral_projection(row.sol.Z, row.K, rank_mode);
    labels = labels_from_projection(phat, row.K, seed);
    if (truth) {
      // proj_error against the projection built from the supplied labels
      Eigen::MatrixXd pbar = Eigen::MatrixXd::Zero(n, n);
      std::vector<int> sizes = truth->community_sizes();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          pbar(i, j) = (truth->same_community(i, j)
                            ? 1.0 / sizes[truth->label(i) - 1]
                            : 0.0) -
                       1.0 / n;
      row.proj_error = (phat - pbar).squaredNorm();
    }
  }

  if (truth) {
    row.has_truth = true;
    row.mis = misclassification(labels, *truth);
    // cluster-matrix target from the supplied labels
    Eigen::MatrixXd zbar(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        zbar(i, j) = truth->same_community(i, j) ? 1.0 : 0.0;
    row.frob_sq = (row.sol.Z - zbar).squaredNorm();
    row.l1 = l1_entrywise(row.sol.Z - zbar);
  }

  std::ostringstream os;
  write_trial_header(os);
  write_trial_row(os, row);
  if (out_path.empty() || out_path == "-") {
    std::cout << os.str();
  } else {
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("cannot open: " + out_path);
    f << os.str();
  }
  return kExitOk;
}

// -------------------------------------------------------------- experiment

struct ExperimentSpec {
  std::vector<int> ns;
  double epsilon = 0.05;
  int trials = 1;
  std::uint64_t master_seed = 0;
  std::string sdp = "eq5";
  SolverConfig solver;
  std::optional<double> lambda_override;
};

ExperimentSpec experiment_from_json(const json& j) {
  ExperimentSpec e;
  const json& grid = j.at("grid");
  e.ns = grid.at("n").get<std::vector<int>>();
  e.epsilon = j.value("epsilon", 0.05);
  e.trials = j.value("trials", 1);
  e.master_seed = j.value("master_seed", 0ULL);
  e.sdp = j.value("sdp", "eq5");
  if (j.contains("lambda_override"))
    e.lambda_override = j.at("lambda_override").get<double>();
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    e.solver.rho = s.value("rho", 0.0);
    e.solver.max_iterations = s.value("max_iterations", 5000);
    e.solver.tol_primal = s.value("tol", 1e-6);
    e.solver.tol_dual = s.value("tol", 1e-6);
  }
  return e;
}

struct Cell {
  int n = 0, K = 2;
  double a = 0.0, b = 0.0;
};

struct TrialOut {
  Cell cell;
  int trial = 0;
  std::uint64_t seed = 0;
  PipelineRow row;
};

TrialOut run_trial(const ExperimentSpec& e, const Cell& cell, int trial) {
  TrialOut out;
  out.cell = cell;
  out.trial = trial;

  ModelSpec spec =
      cell.K == 2 ? ModelSpec::classical(cell.n, cell.a / cell.n, cell.b / cell.n)
                  : ModelSpec::balanced(cell.K, cell.n / cell.K,
                                        cell.a / (cell.n / cell.K),
                                        cell.b / (cell.n / cell.K));
  spec.validate();
  const std::uint64_t cell_seed = derive_stream(
      e.master_seed, (static_cast<std::uint64_t>(cell.n) << 40) ^
                         (static_cast<std::uint64_t>(cell.K) << 32) ^
                         (static_cast<std::uint64_t>(cell.a * 64.0) << 12) ^
                         static_cast<std::uint64_t>(cell.b * 64.0));
  out.seed = derive_stream(cell_seed, static_cast<std::uint64_t>(trial));

  const AdjacencyMatrix a = sample_graph(spec, out.seed);
  const int n = spec.n;
  const GroundTruth truth = ground_truth(spec);
  const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(n, n);

  PipelineRow& row = out.row;
  row.sdp = e.sdp;
  row.n = n;
  row.K = cell.K;
  row.seed = out.seed;
  row.has_truth = true;

  FeasibleSet set;
  Eigen::MatrixXd b;
  if (e.sdp == "eq5") {
    set = FeasibleSet::grothendieck_psd();
    row.lambda = estimate_lambda(a);
    b = a - row.lambda * ones;
  } else if (e.sdp == "eq8") {
    row.lambda = e.lambda_override
                     ? *e.lambda_override
                     : lambda_cluster_count(spec.truth_assignment());
    set = FeasibleSet::sum_constrained(row.lambda);
    b = a;
  } else if (e.sdp == "eq24") {
    set = FeasibleSet::k_community(cell.K);
    row.lambda = estimate_lambda(a);
    b = a - row.lambda * ones;
  } else {
    throw std::invalid_argument("experiment: unknown sdp '" + e.sdp + "'");
  }

  row.sol = solve(b, set, e.solver);

  CommunityAssignment labels;
  if (cell.K == 2) {
    labels = round_leading_eigenvector(row.sol.Z).second;
  } else {
    const Eigen::MatrixXd phat =
        spectral_projection(row.sol.Z, cell.K, RankMode::KMinus1);
    labels = labels_from_projection(phat, cell.K, out.seed);
    row.proj_error = (phat - truth.P).squaredNorm();
  }
  row.mis = misclassification(labels, spec.truth_assignment());
  const auto [frob_sq, l1] = matrix_errors(row.sol.Z, truth, ErrorTarget::Zbar);
  row.frob_sq = frob_sq;
  row.l1 = l1;
  row.sol.Z.resize(0, 0);  // rows can be numerous; drop the matrices
  row.sol.dual.resize(0, 0);
  return out;
}

int cmd_experiment(const std::string& spec_path, const std::string& out_path,
                   int threads) {
  const json j = load_json_file(spec_path);
  const ExperimentSpec e = experiment_from_json(j);
  if (e.trials < 1) throw std::invalid_argument("experiment: trials must be >= 1");
  if (e.epsilon <= 0.0 || e.epsilon >= 1.0)
    throw std::invalid_argument("experiment: epsilon must lie in (0,1)");

  const json& grid = j.at("grid");
  const std::vector<double> as = grid.at("a").get<std::vector<double>>();
  const std::vector<double> bs = grid.at("b").get<std::vector<double>>();
  const std::vector<int> ks =
      grid.contains("K") ? grid.at("K").get<std::vector<int>>() : std::vector<int>{2};
  std::vector<Cell> cells;
  for (int n : e.ns)
    for (double a : as)
      for (double b : bs)
        for (int k : ks) cells.push_back({n, k, a, b});
  if (cells.empty()) throw std::invalid_argument("experiment: empty grid");

  const int total = static_cast<int>(cells.size()) * e.trials;
  std::vector<TrialOut> results(static_cast<std::size_t>(total));
  std::vector<std::string> errors(static_cast<std::size_t>(total));
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int idx = next.fetch_add(1);
      if (idx >= total) return;
      const Cell& cell = cells[static_cast<std::size_t>(idx / e.trials)];
      const int trial = idx % e.trials;
      try {
        results[static_cast<std::size_t>(idx)] = run_trial(e, cell, trial);
      } catch (const std::exception& ex) {
        errors[static_cast<std::size_t>(idx)] = ex.what();
        results[static_cast<std::size_t>(idx)].cell = cell;
        results[static_cast<std::size_t>(idx)].trial = trial;
      }
    }
  };
  std::vector<std::thread> pool;
  const int nthreads = std::max(1, std::min(threads, total));
  for (int i = 1; i < nthreads; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  std::ofstream f(out_path);
  if (!f) throw std::runtime_error("cannot open: " + out_path);
  f << "# schema=experiment.v1\n";
  f << "n,K,a,b,trial,seed,sdp,lambda,iterations,converged,objective,"
       "primal_residual,dual_residual,mis,frob_sq_error,l1_error,proj_error,"
       "error\n";
  for (int idx = 0; idx < total; ++idx) {
    const TrialOut& r = results[static_cast<std::size_t>(idx)];
    f << r.cell.n << ',' << r.cell.K << ',' << fmt(r.cell.a) << ','
      << fmt(r.cell.b) << ',' << r.trial << ',';
    if (errors[static_cast<std::size_t>(idx)].empty()) {
      const PipelineRow& row = r.row;
      f << r.seed << ',' << row.sdp << ',' << fmt(row.lambda) << ','
        << row.sol.iterations << ',' << (row.sol.converged ? 1 : 0) << ','
        << fmt(row.sol.objective) << ',' << fmt(row.sol.primal_residual) << ','
        << fmt(row.sol.dual_residual) << ',' << fmt(row.mis) << ','
        << fmt(row.frob_sq) << ',' << fmt(row.l1) << ',' << fmt(row.proj_error)
        << ",\n";
    } else {
      f << ",,,,,,,,,,,," << errors[static_cast<std::size_t>(idx)] << '\n';
    }
  }
  f.close();

  // summary: per-cell mean and quartiles of misclassification
  std::ofstream s(out_path + ".summary");
  if (!s) throw std::runtime_error("cannot open: " + out_path + ".summary");
  s << "# schema=experiment-summary.v1\n";
  s << "n,K,a,b,trials,mis_mean,mis_q25,mis_median,mis_q75\n";
  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::vector<double> mis;
    for (int t = 0; t < e.trials; ++t) {
      const std::size_t idx = c * static_cast<std::size_t>(e.trials) +
                              static_cast<std::size_t>(t);
      if (errors[idx].empty()) mis.push_back(results[idx].row.mis);
    }
    std::sort(mis.begin(), mis.end());
    auto quantile = [&](double q) {
      if (mis.empty()) return 0.0;
      const double pos = q * (static_cast<double>(mis.size()) - 1.0);
      const std::size_t lo = static_cast<std::size_t>(pos);
      const std::size_t hi = std::min(lo + 1, mis.size() - 1);
      return mis[lo] + (pos - static_cast<double>(lo)) * (mis[hi] - mis[lo]);
    };
    double mean = 0.0;
    for (double v : mis) mean += v;
    if (!mis.empty()) mean /= static_cast<double>(mis.size());
    s << cells[c].n << ',' << cells[c].K << ',' << fmt(cells[c].a) << ','
      << fmt(cells[c].b) << ',' << mis.size() << ',' << fmt(mean) << ','
      << fmt(quantile(0.25)) << ',' << fmt(quantile(0.5)) << ','
      << fmt(quantile(0.75)) << '\n';
  }
  std::cout << "wrote " << total << " rows to " << out_path << " (+ summary)\n";
  return kExitOk;
}

// ------------------------------------------------------------------- audit

int cmd_audit(const std::string& claim, int n, int trials, std::uint64_t seed,
              double p, double q, int K, int s, const std::string& mode,
              const std::string& out_path) {
  AuditReport report;
  if (claim == "grothendieck_psd") {
    report = audit_grothendieck_psd(n, trials, seed);
  } else {
    ModelSpec spec = s > 0 ? ModelSpec::balanced(K, s, p, q)
                           : ModelSpec::classical(n, p, q);
    if (claim == "deviation") {
      report = audit_deviation(spec, trials, seed,
                               mode == "exact" ? CutNormMode::Exact
                                               : CutNormMode::Lower);
    } else if (claim == "sum_deviation") {
      report = audit_sum_deviation(spec, trials, seed);
    } else if (claim == "almost_max") {
      report = audit_almost_maximizer(spec, trials, seed);
    } else if (claim == "distinguishing") {
      report = audit_distinguishing(spec, trials, seed);
    } else {
      std::cerr << "unknown claim: " << claim << '\n';
      return kExitUsage;
    }
  }

  if (out_path.empty() || out_path == "-") {
    report.write_csv(std::cout);
  } else {
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("cannot open: " + out_path);
    report.write_csv(f);
  }
  std::cerr << "claim=" << report.claim_id << " trials=" << report.trials
            << " violations=" << report.violations
            << " aborted=" << report.aborted
            << " hypothesis_ok=" << (report.hypothesis_ok ? 1 : 0)
            << " margin_min=" << fmt(report.margin_min)
            << " margin_mean=" << fmt(report.margin_mean) << '\n';
  return report.violations > 0 ? kExitViolation : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stochastic block model SDP toolkit"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::string out;
  std::string spec_path, graph_path, truth_path;
  std::string sdp = "eq5", rank_mode_str = "k-1", mode = "lower", claim;
  int max_iter = 5000, threads = default_threads(), k_opt = 0, n = 0, trials = 10,
      s = 0;
  double tol = 1e-6, rho = 0.0, p = 0.5, q = 0.5;
  std::optional<double> lambda_override;
  double lambda_flag = -1.0;

  CLI::App* gen = app.add_subcommand("generate", "sample a graph to disk");
  gen->add_option("--spec", spec_path, "model spec JSON")->required();
  gen->add_option("--out", out, "output path prefix")->required();
  gen->add_option("--seed", seed, "RNG seed");

  CLI::App* pipe = app.add_subcommand("pipeline", "solve + round one instance");
  pipe->add_option("--graph", graph_path, "MatrixMarket graph file")->required();
  pipe->add_option("--sdp", sdp, "eq5 | eq8 | eq24");
  pipe->add_option("--lambda", lambda_flag, "entry-sum budget for eq8");
  pipe->add_option("--truth", truth_path, "ground-truth label file");
  pipe->add_option("--K", k_opt, "community count for eq24");
  pipe->add_option("--rank-mode", rank_mode_str, "k-1 | 2k-3");
  pipe->add_option("--seed", seed, "RNG seed for rounding");
  pipe->add_option("--tol", tol, "solver residual tolerance");
  pipe->add_option("--max-iter", max_iter, "solver iteration cap");
  pipe->add_option("--rho", rho, "consensus penalty (0 = 1/n)");
  pipe->add_option("--out", out, "output CSV ('-' for stdout)");

  CLI::App* exp = app.add_subcommand("experiment", "Monte-Carlo grid run");
  exp->add_option("--spec", spec_path, "experiment spec JSON")->required();
  exp->add_option("--out", out, "output CSV path")->required();
  exp->add_option("--threads", threads, "worker threads");

  CLI::App* aud = app.add_subcommand("audit", "inequality audit");
  aud->add_option("--claim", claim,
                  "deviation | sum_deviation | grothendieck_psd | almost_max | "
                  "distinguishing")
      ->required();
  aud->add_option("--n", n, "instance size");
  aud->add_option("--trials", trials, "trial count");
  aud->add_option("--seed", seed, "master seed");
  aud->add_option("--p", p, "within-community probability");
  aud->add_option("--q", q, "across-community probability");
  aud->add_option("--K", k_opt, "community count (balanced model)");
  aud->add_option("--s", s, "community size (balanced model)");
  aud->add_option("--mode", mode, "deviation cut-norm mode: exact | lower");
  aud->add_option("--out", out, "output CSV ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_generate(spec_path, out, seed);
    if (pipe->parsed()) {
      if (lambda_flag >= 0.0) lambda_override = lambda_flag;
      SolverConfig cfg;
      cfg.rho = rho;
      cfg.max_iterations = max_iter;
      cfg.tol_primal = tol;
      cfg.tol_dual = tol;
      const RankMode rank_mode =
          rank_mode_str == "2k-3" ? RankMode::TwoKMinus3 : RankMode::KMinus1;
      return cmd_pipeline(graph_path, sdp, lambda_override, truth_path, k_opt,
                          rank_mode, seed, cfg, out);
    }
    if (exp->parsed()) return cmd_experiment(spec_path, out, threads);
    if (aud->parsed())
      return cmd_audit(claim, n, trials, seed, p, q, k_opt, s, mode, out);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitUsage;
}
