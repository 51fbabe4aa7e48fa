#include "sbm/audit.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "sbm/linalg.hpp"
#include "sbm/recovery.hpp"
#include "sbm/rng.hpp"

namespace sbm {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

double gaussian(SplitMix64& rng) {
  // Box-Muller; one value per call keeps the stream layout simple.
  double u1 = rng.next_double();
  while (u1 <= 0.0) u1 = rng.next_double();
  const double u2 = rng.next_double();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace

void AuditReport::write_csv(std::ostream& os) const {
  os << "# schema=audit.v1\n";
  os << "claim_id,trial,observed,bound,hypothesis_ok,violation\n";
  for (const AuditTrial& row : rows) {
    os << claim_id << ',' << row.trial << ',' << fmt(row.observed) << ','
       << fmt(row.bound) << ',' << (row.hypothesis_ok ? 1 : 0) << ','
       << (row.violation ? 1 : 0) << '\n';
  }
}

void AuditReport::finalize() {
  trials = static_cast<int>(rows.size());
  violations = 0;
  aborted = 0;
  double margin_sum = 0.0;
  margin_min = std::numeric_limits<double>::infinity();
  int counted = 0;
  for (const AuditTrial& row : rows) {
    if (row.aborted) {
      ++aborted;
      continue;
    }
    if (row.violation) ++violations;
    const double margin = row.bound - row.observed;
    margin_min = std::min(margin_min, margin);
    margin_sum += margin;
    ++counted;
  }
  margin_mean = counted > 0 ? margin_sum / counted : 0.0;
  if (counted == 0) margin_min = 0.0;
}

AuditReport audit_deviation(const ModelSpec& spec, int trials, std::uint64_t seed,
                            CutNormMode mode) {
  spec.validate();
  const int n = spec.n;
  if (mode == CutNormMode::Exact && n > 26)
    throw std::invalid_argument("audit_deviation: exact mode requires n <= 26");

  const ModelStatistics stats = model_statistics(spec);
  const bool hyp = stats.pbar >= 9.0 / n;
  const double bound = 3.0 * std::sqrt(stats.pbar) * std::pow(n, 1.5);
  const Eigen::MatrixXd ea = expected_adjacency(spec);

  AuditReport report;
  report.claim_id = mode == CutNormMode::Exact ? "deviation_exact" : "deviation_lower";
  report.hypothesis_ok = hyp;
  for (int t = 0; t < trials; ++t) {
    const AdjacencyMatrix a = sample_graph(spec, derive_stream(seed, t));
    const Eigen::MatrixXd dev = a - ea;
    AuditTrial row;
    row.trial = t;
    row.hypothesis_ok = hyp;
    row.bound = bound;
    row.observed = mode == CutNormMode::Exact
                       ? cut_norm_exact(dev)
                       : cut_norm_lower(dev, 20, derive_stream(seed ^ 0x5DEECE66DULL, t));
    row.violation = hyp && row.observed > row.bound;
    report.rows.push_back(row);
  }
  report.finalize();
  return report;
}

AuditReport audit_sum_deviation(const ModelSpec& spec, int trials, std::uint64_t seed) {
  spec.validate();
  const int n = spec.n;
  const ModelStatistics stats = model_statistics(spec);
  const bool hyp = stats.pbar >= 9.0 / n;
  const double bound = 3.0 * std::sqrt(stats.pbar) / std::sqrt(static_cast<double>(n));
  const Eigen::MatrixXd ea = expected_adjacency(spec);

  AuditReport report;
  report.claim_id = "sum_deviation";
  report.hypothesis_ok = hyp;
  for (int t = 0; t < trials; ++t) {
    const AdjacencyMatrix a = sample_graph(spec, derive_stream(seed, t));
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) acc += a(i, j) - ea(i, j);
    AuditTrial row;
    row.trial = t;
    row.hypothesis_ok = hyp;
    row.bound = bound;
    row.observed = 2.0 * std::abs(acc) / (static_cast<double>(n) * (n - 1));
    row.violation = hyp && row.observed > row.bound;
    report.rows.push_back(row);
  }
  report.finalize();
  return report;
}

AuditReport audit_grothendieck_psd(int n, int trials, std::uint64_t seed,
                                   const SolverConfig& cfg) {
  if (n > 14)
    throw std::invalid_argument("audit_grothendieck_psd: n must be <= 14");
  const FeasibleSet set = FeasibleSet::grothendieck_psd();

  AuditReport report;
  report.claim_id = "grothendieck_psd";
  for (int t = 0; t < trials; ++t) {
    SplitMix64 rng(derive_stream(seed, t));
    Eigen::MatrixXd b(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        const double v = 2.0 * rng.next_double() - 1.0;
        b(i, j) = v;
        b(j, i) = v;
      }
    }
    AuditTrial row;
    row.trial = t;
    const SdpSolution pos = solve(b, set, cfg);
    const SdpSolution neg = solve(-b, set, cfg);
    if (!pos.converged || !neg.converged) {
      row.aborted = true;
      report.rows.push_back(row);
      continue;
    }
    const double gap = std::max(duality_gap_certificate(b, set, pos),
                                duality_gap_certificate(-b, set, neg));
    row.observed = std::max(pos.objective, neg.objective);
    row.bound = kGrothendieckConstant * cut_norm_exact(b) + gap;
    row.violation = row.observed > row.bound;
    report.rows.push_back(row);
  }
  report.finalize();
  return report;
}

ReferenceInstance make_reference(const ModelSpec& spec) {
  spec.validate();
  const GroundTruth truth = ground_truth(spec);
  ReferenceInstance ref;
  switch (spec.variant) {
    case ModelVariant::Classical:
      ref.Z_R = truth.x * truth.x.transpose();
      ref.scale = (spec.p - spec.q) / 2.0;
      ref.R = ref.scale * ref.Z_R;
      ref.set = FeasibleSet::grothendieck_psd();
      break;
    case ModelVariant::Balanced:
      ref.scale = spec.s * (spec.p - spec.q);
      ref.R = ref.scale * truth.P;
      ref.Z_R = (static_cast<double>(spec.s) * spec.K / (spec.K - 1)) * truth.P;
      ref.set = FeasibleSet::k_community(spec.K);
      break;
    case ModelVariant::General:
      ref.R = expected_adjacency(spec);
      ref.Z_R = truth.Z;
      ref.scale = (spec.p - spec.q) / 2.0;
      ref.set = FeasibleSet::sum_constrained(lambda_cluster_count(spec.truth_assignment()));
      break;
  }
  return ref;
}

AuditReport audit_almost_maximizer(const ModelSpec& spec, int trials,
                                   std::uint64_t seed, const SolverConfig& cfg) {
  spec.validate();
  const int n = spec.n;
  if (n > 26)
    throw std::invalid_argument("audit_almost_maximizer: n must be <= 26");
  const ReferenceInstance ref = make_reference(spec);
  const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(n, n);
  const double ref_value = (ref.R.cwiseProduct(ref.Z_R)).sum();
  // slack for the near-feasibility of the terminated solver iterate; its
  // objective can sit slightly above the true optimum at these residuals
  const double feas_slack =
      5.0 * (cfg.tol_primal + cfg.tol_dual) * (1.0 + l1_entrywise(ref.R));

  AuditReport report;
  report.claim_id = "almost_max";
  for (int t = 0; t < trials; ++t) {
    const AdjacencyMatrix a = sample_graph(spec, derive_stream(seed, t));
    Eigen::MatrixXd b;
    if (ref.set.kind == FeasibleSet::Kind::SumConstrained) {
      b = a;
    } else {
      b = a - estimate_lambda(a) * ones;
    }
    AuditTrial row;
    row.trial = t;
    const SdpSolution sol = solve(b, ref.set, cfg);
    if (!sol.converged) {
      row.aborted = true;
      report.rows.push_back(row);
      continue;
    }
    const double gap = duality_gap_certificate(b, ref.set, sol);
    const double lower =
        ref_value - 2.0 * kGrothendieckConstant * cut_norm_exact(b - ref.R);
    const double value = (ref.R.cwiseProduct(sol.Z)).sum();
    // Both sides of the sandwich, expressed as violations (positive = broken).
    const double lower_violation = (lower - gap) - value;
    const double upper_violation = value - ref_value;
    row.observed = std::max(lower_violation, upper_violation);
    row.bound = feas_slack;
    row.violation = row.observed > row.bound;
    report.rows.push_back(row);
  }
  report.finalize();
  return report;
}

AuditReport audit_distinguishing(const ModelSpec& spec, int trials,
                                 std::uint64_t seed) {
  spec.validate();
  const int n = spec.n;
  const GroundTruth truth = ground_truth(spec);
  const Eigen::MatrixXd abar = expected_adjacency(spec);
  const double lambda0 = lambda_cluster_count(spec.truth_assignment());
  const FeasibleSet set = FeasibleSet::sum_constrained(lambda0);

  AuditReport report;
  report.claim_id = "distinguishing";
  for (int t = 0; t < trials; ++t) {
    SplitMix64 rng(derive_stream(seed, t));
    Eigen::MatrixXd noise(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        const double v = 0.5 * gaussian(rng);
        noise(i, j) = v;
        noise(j, i) = v;
      }
    }
    const Eigen::MatrixXd z = project_entrywise(truth.Z + noise, set);
    AuditTrial row;
    row.trial = t;
    row.observed = 0.5 * (spec.p - spec.q) * l1_entrywise(truth.Z - z);
    row.bound = (abar.cwiseProduct(truth.Z - z)).sum();
    row.violation = row.observed > row.bound;
    report.rows.push_back(row);
  }
  report.finalize();
  return report;
}

}  // namespace sbm
