#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace sbm {

/// Community labels, 1-based: labels()[i] in {1, ..., K}.
class CommunityAssignment {
 public:
  CommunityAssignment() = default;
  explicit CommunityAssignment(std::vector<int> labels);

  int size() const { return static_cast<int>(labels_.size()); }
  int community_count() const { return k_; }
  const std::vector<int>& labels() const { return labels_; }
  int label(int i) const { return labels_[static_cast<std::size_t>(i)]; }

  /// |C_1|, ..., |C_K|.
  std::vector<int> community_sizes() const;

  bool same_community(int i, int j) const { return label(i) == label(j); }

 private:
  std::vector<int> labels_;
  int k_ = 0;
};

enum class ModelVariant { Classical, General, Balanced };

/// One of the three block-model variants. Use the named constructors;
/// validate() checks the variant's parameter constraints and throws
/// std::invalid_argument naming the violated one.
struct ModelSpec {
  ModelVariant variant = ModelVariant::Classical;

  int n = 0;       // vertex count
  double p = 0.0;  // within-community threshold / probability
  double q = 0.0;  // across-community threshold / probability

  // Balanced only
  int K = 2;  // community count
  int s = 0;  // community size (n = K * s)

  // General only
  Eigen::MatrixXd prob;             // n x n symmetric, prob(i,i) = 1
  CommunityAssignment assignment;   // arbitrary partition

  static ModelSpec classical(int n, double p, double q);
  static ModelSpec balanced(int K, int s, double p, double q);
  static ModelSpec general(Eigen::MatrixXd prob, CommunityAssignment assignment,
                           double p, double q);

  void validate() const;

  int size() const { return n; }
  int community_count() const;

  /// Canonical ground-truth labeling (contiguous blocks for Classical /
  /// Balanced; the supplied assignment for General).
  CommunityAssignment truth_assignment() const;

  /// Edge probability for the (unordered) pair i != j.
  double edge_probability(int i, int j) const;
};

/// Symmetric 0/1 matrix with unit diagonal (every vertex carries a self-loop).
using AdjacencyMatrix = Eigen::MatrixXd;

struct GroundTruth {
  bool has_x = false;
  Eigen::VectorXd x;  // +-1 membership vector, only when K = 2
  Eigen::MatrixXd Z;  // 0/1 cluster matrix
  Eigen::MatrixXd P;  // rank-(K-1) community projection
};

struct ModelStatistics {
  double pbar = 0.0;  // mean variance of the above-diagonal edges
  double g = 0.0;     // pbar * n
  double a = 0.0;     // p * n  (p * s for Balanced)
  double b = 0.0;     // q * n  (q * s for Balanced)
};

/// Samples an adjacency matrix; identical (spec, seed) pairs are bit-identical.
AdjacencyMatrix sample_graph(const ModelSpec& spec, std::uint64_t seed);

/// Entrywise expectation of sample_graph: p_ij off the diagonal, 1 on it.
Eigen::MatrixXd expected_adjacency(const ModelSpec& spec);

/// x (K=2 only), cluster matrix Z, and the community projection P.
GroundTruth ground_truth(const ModelSpec& spec);

ModelStatistics model_statistics(const ModelSpec& spec);

/// Expected average degree with loops removed, computed by direct summation
/// of the edge means over all above-diagonal pairs.
double expected_lambda(const ModelSpec& spec);

}  // namespace sbm
