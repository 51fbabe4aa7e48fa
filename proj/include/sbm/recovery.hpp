#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>

#include "sbm/model.hpp"

namespace sbm {

enum class RankMode { TwoKMinus3, KMinus1 };

enum class ErrorTarget { XxT, Zbar };

struct RecoveryResult {
  Eigen::VectorXd xhat;            // +-1 rounding, two-class path
  CommunityAssignment labels;
  Eigen::MatrixXd Phat;            // K >= 3 path
  double misclassified_fraction = 0.0;
  double frob_sq_error = 0.0;
  double l1_error = 0.0;
  double proj_error = 0.0;         // ||Phat - Pbar||_F^2
};

/// Average degree of the graph with loops removed (the program's lambda).
double estimate_lambda(const AdjacencyMatrix& a);

/// sum_k |C_k|^2, the entry count of the cluster matrix.
double lambda_cluster_count(const CommunityAssignment& assignment);

/// Scales the top unit eigenvector to norm sqrt(n) and rounds its signs into
/// two classes; zero entries go to class 1.
std::pair<Eigen::VectorXd, CommunityAssignment> round_leading_eigenvector(
    const Eigen::MatrixXd& zhat);

/// Orthogonal projection onto the span of the top 2K-3 (or K-1) eigenvectors.
Eigen::MatrixXd spectral_projection(const Eigen::MatrixXd& zhat, int K,
                                    RankMode rank_mode);

/// k-means (k = K) on the rows of the projection, 20 restarts, best
/// within-cluster sum of squares; deterministic given the seed.
CommunityAssignment labels_from_projection(const Eigen::MatrixXd& phat, int K,
                                           std::uint64_t seed);

/// Minimum disagreement fraction over all bijective relabelings, via exact
/// assignment on the confusion matrix.
double misclassification(const CommunityAssignment& est,
                         const CommunityAssignment& truth);

/// (frobenius_sq, l1) distance from Zhat to the selected ground-truth target.
std::pair<double, double> matrix_errors(const Eigen::MatrixXd& zhat,
                                        const GroundTruth& truth,
                                        ErrorTarget target);

}  // namespace sbm
