#pragma once

#include <Eigen/Dense>
#include <ostream>

namespace sbm {

enum class DiagMode { Inequality, Equality };

/// Feasible set of the semidefinite program max <B, Z>.
///
///  - GrothendieckPsd:  Z psd, diag(Z) <= 1
///  - SumConstrained:   Z psd, 0 <= Z_ij <= 1, diag(Z) <= 1, sum_ij Z_ij = lambda
///  - KCommunity:       Z psd, Z_ij >= -1/(K-1), diag(Z) <= 1 (or = 1)
struct FeasibleSet {
  enum class Kind { GrothendieckPsd, SumConstrained, KCommunity };

  Kind kind = Kind::GrothendieckPsd;
  double lambda = 0.0;                       // SumConstrained
  int K = 2;                                 // KCommunity
  DiagMode diag_mode = DiagMode::Inequality; // KCommunity

  static FeasibleSet grothendieck_psd();
  static FeasibleSet sum_constrained(double lambda);
  static FeasibleSet k_community(int K, DiagMode diag_mode = DiagMode::Inequality);

  /// Throws std::invalid_argument for lambda outside (0, n^2] or K < 2.
  void validate(int n) const;
};

struct SolverConfig {
  double rho = 0.0;              // consensus penalty; 0 selects the 1/n default
  int max_iterations = 5000;
  double tol_primal = 1e-6;      // ||X - Y||_F / n at termination
  double tol_dual = 1e-6;        // rho * ||Y - Y_prev||_F / n at termination
  double over_relaxation = 1.6;  // alpha in [1, 1.9]
  std::ostream* trace = nullptr; // optional CSV sink: iteration,objective,primal,dual
};

struct SdpSolution {
  Eigen::MatrixXd Z;
  double objective = 0.0;        // <B, Z>
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  Eigen::MatrixXd dual;          // terminal consensus multiplier (rho * U)
};

/// Maximizes <B, Z> over the feasible set by two-block consensus splitting:
/// one block projects onto the psd cone, the other handles the entrywise and
/// affine constraints with the linear objective folded into its update.
/// Non-convergence within max_iterations returns converged = false.
SdpSolution solve(const Eigen::MatrixXd& b, const FeasibleSet& set,
                  const SolverConfig& cfg = {});

/// Exact Euclidean projection onto the set's entrywise/affine constraints
/// (the non-psd half of the splitting), symmetrized.
Eigen::MatrixXd project_entrywise(const Eigen::MatrixXd& w, const FeasibleSet& set);

/// Worst entrywise/affine constraint violation plus psd deficit (-min
/// eigenvalue, clamped at 0) of Z against the set.
double feasibility_violation(const Eigen::MatrixXd& z, const FeasibleSet& set);

/// Certified upper bound on max <B, .> - <B, Z>, built from the terminal
/// dual of the splitting. Throws if sol.Z is infeasible beyond tolerance.
double duality_gap_certificate(const Eigen::MatrixXd& b, const FeasibleSet& set,
                               const SdpSolution& sol, double feas_tol = 1e-4);

}  // namespace sbm
