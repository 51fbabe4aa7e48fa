#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "sbm/model.hpp"
#include "sbm/solver.hpp"

namespace sbm {

/// Best known bound on the Grothendieck constant.
inline constexpr double kGrothendieckConstant = 1.783;

enum class CutNormMode { Exact, Lower };

struct AuditTrial {
  int trial = 0;
  double observed = 0.0;
  double bound = 0.0;
  bool hypothesis_ok = true;
  bool violation = false;
  bool aborted = false;
};

struct AuditReport {
  std::string claim_id;
  int trials = 0;
  int violations = 0;   // trials with observed strictly above the bound
  int aborted = 0;      // solver non-convergence etc., reported separately
  bool hypothesis_ok = true;
  double margin_min = 0.0;   // min over trials of (bound - observed)
  double margin_mean = 0.0;
  std::vector<AuditTrial> rows;

  /// claim_id, trial, observed, bound, hypothesis_ok, violation
  void write_csv(std::ostream& os) const;

  void finalize();
};

/// Deviation in the cut norm: per trial ||A - EA||_{inf->1} vs the bound
/// 3 * pbar^{1/2} * n^{3/2}. Exact mode requires n <= 26. The hypothesis
/// pbar >= 9/n is reported, not enforced; in Lower mode a violation is a
/// genuine counterexample.
AuditReport audit_deviation(const ModelSpec& spec, int trials, std::uint64_t seed,
                            CutNormMode mode);

/// Normalized sum of edge deviations vs 3 * pbar^{1/2} * n^{-1/2}.
AuditReport audit_sum_deviation(const ModelSpec& spec, int trials, std::uint64_t seed);

/// Random symmetric B with entries uniform on [-1,1]: SDP value over the psd
/// Grothendieck set vs 1.783 * exact cut norm + duality gap. Requires n <= 14.
AuditReport audit_grothendieck_psd(int n, int trials, std::uint64_t seed,
                                   const SolverConfig& cfg = {});

/// Closed-form reference objective and its maximizer for a spec.
struct ReferenceInstance {
  Eigen::MatrixXd R;
  Eigen::MatrixXd Z_R;
  double scale = 0.0;  // R = scale * Z_R for the GrothendieckPsd case
  FeasibleSet set;
};

/// Builds (R, Z_R) for the Classical (psd set) or Balanced (K-community set)
/// variant; for General, R is the expected adjacency and Z_R the cluster matrix.
ReferenceInstance make_reference(const ModelSpec& spec);

/// Sandwich <R,Z_R> - 2 K_G ||B - R||_{inf->1} <= <R,Zhat> <= <R,Z_R> per
/// trial, with B = A - lambda(A) E_n sampled from the spec. Requires n <= 26.
AuditReport audit_almost_maximizer(const ModelSpec& spec, int trials,
                                   std::uint64_t seed, const SolverConfig& cfg = {});

/// <Abar, Zbar - Z> >= ((p-q)/2) ||Zbar - Z||_1 for feasible Z sampled by
/// projecting Gaussian perturbations of Zbar onto the sum-constrained box.
AuditReport audit_distinguishing(const ModelSpec& spec, int trials,
                                 std::uint64_t seed);

}  // namespace sbm
