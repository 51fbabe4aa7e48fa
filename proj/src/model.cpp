#include "sbm/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "sbm/rng.hpp"

namespace sbm {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

}  // namespace

CommunityAssignment::CommunityAssignment(std::vector<int> labels)
    : labels_(std::move(labels)) {
  for (int v : labels_) {
    if (v < 1) fail("CommunityAssignment: labels must be >= 1");
    k_ = std::max(k_, v);
  }
}

std::vector<int> CommunityAssignment::community_sizes() const {
  std::vector<int> sizes(static_cast<std::size_t>(k_), 0);
  for (int v : labels_) ++sizes[static_cast<std::size_t>(v - 1)];
  return sizes;
}

ModelSpec ModelSpec::classical(int n, double p, double q) {
  ModelSpec spec;
  spec.variant = ModelVariant::Classical;
  spec.n = n;
  spec.p = p;
  spec.q = q;
  spec.K = 2;
  spec.s = n / 2;
  return spec;
}

ModelSpec ModelSpec::balanced(int K, int s, double p, double q) {
  ModelSpec spec;
  spec.variant = ModelVariant::Balanced;
  spec.K = K;
  spec.s = s;
  spec.n = K * s;
  spec.p = p;
  spec.q = q;
  return spec;
}

ModelSpec ModelSpec::general(Eigen::MatrixXd prob, CommunityAssignment assignment,
                             double p, double q) {
  ModelSpec spec;
  spec.variant = ModelVariant::General;
  spec.n = static_cast<int>(prob.rows());
  spec.prob = std::move(prob);
  spec.assignment = std::move(assignment);
  spec.p = p;
  spec.q = q;
  spec.K = spec.assignment.community_count();
  return spec;
}

void ModelSpec::validate() const {
  if (n <= 0) fail("ModelSpec: n must be positive");
  if (!(q >= 0.0 && q <= p && p <= 1.0))
    fail("ModelSpec: needs 0 <= q <= p <= 1");
  switch (variant) {
    case ModelVariant::Classical:
      if (n % 2 != 0) fail("ModelSpec: Classical requires n even");
      break;
    case ModelVariant::Balanced:
      if (K < 1 || s < 1 || n != K * s)
        fail("ModelSpec: Balanced requires n = K*s with K, s >= 1");
      break;
    case ModelVariant::General: {
      if (prob.rows() != n || prob.cols() != n)
        fail("ModelSpec: probMatrix must be n x n");
      if (assignment.size() != n)
        fail("ModelSpec: assignment length must equal n");
      for (int i = 0; i < n; ++i) {
        if (prob(i, i) != 1.0) fail("ModelSpec: probMatrix diagonal must be 1");
        for (int j = i + 1; j < n; ++j) {
          const double pij = prob(i, j);
          if (pij != prob(j, i)) fail("ModelSpec: probMatrix must be symmetric");
          if (pij < 0.0 || pij > 1.0)
            fail("ModelSpec: probMatrix entries must lie in [0,1]");
          const bool same = assignment.same_community(i, j);
          if (same && pij < p) {
            std::ostringstream os;
            os << "ModelSpec: p_ij >= p violated at pair (" << i + 1 << ","
               << j + 1 << "): " << pij << " < " << p;
            fail(os.str());
          }
          if (!same && pij > q) {
            std::ostringstream os;
            os << "ModelSpec: p_ij <= q violated at pair (" << i + 1 << ","
               << j + 1 << "): " << pij << " > " << q;
            fail(os.str());
          }
        }
      }
      break;
    }
  }
}

int ModelSpec::community_count() const {
  return variant == ModelVariant::General ? assignment.community_count() : K;
}

CommunityAssignment ModelSpec::truth_assignment() const {
  if (variant == ModelVariant::General) return assignment;
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = i / s + 1;
  return CommunityAssignment(std::move(labels));
}

double ModelSpec::edge_probability(int i, int j) const {
  if (variant == ModelVariant::General) return prob(i, j);
  const bool same = (i / s) == (j / s);
  return same ? p : q;
}

AdjacencyMatrix sample_graph(const ModelSpec& spec, std::uint64_t seed) {
  spec.validate();
  const int n = spec.n;
  AdjacencyMatrix a = AdjacencyMatrix::Zero(n, n);
  SplitMix64 rng(seed);
  for (int i = 0; i < n; ++i) {
    a(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      const double edge = rng.bernoulli(spec.edge_probability(i, j)) ? 1.0 : 0.0;
      a(i, j) = edge;
      a(j, i) = edge;
    }
  }
  return a;
}

Eigen::MatrixXd expected_adjacency(const ModelSpec& spec) {
  spec.validate();
  const int n = spec.n;
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      const double pij = spec.edge_probability(i, j);
      m(i, j) = pij;
      m(j, i) = pij;
    }
  }
  return m;
}

GroundTruth ground_truth(const ModelSpec& spec) {
  spec.validate();
  const int n = spec.n;
  const CommunityAssignment asg = spec.truth_assignment();
  const int k = asg.community_count();

  GroundTruth truth;
  truth.Z = Eigen::MatrixXd::Zero(n, n);
  truth.P = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const bool same = asg.same_community(i, j);
      truth.Z(i, j) = same ? 1.0 : 0.0;
      truth.P(i, j) = same ? static_cast<double>(k - 1) / n : -1.0 / n;
    }
  }
  if (k == 2) {
    truth.has_x = true;
    truth.x.resize(n);
    for (int i = 0; i < n; ++i) truth.x(i) = asg.label(i) == 1 ? 1.0 : -1.0;
  }
  return truth;
}

ModelStatistics model_statistics(const ModelSpec& spec) {
  spec.validate();
  const int n = spec.n;
  double var_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double pij = spec.edge_probability(i, j);
      var_sum += pij * (1.0 - pij);
    }
  }
  ModelStatistics stats;
  stats.pbar = n > 1 ? 2.0 * var_sum / (static_cast<double>(n) * (n - 1)) : 0.0;
  stats.g = stats.pbar * n;
  const double scale =
      spec.variant == ModelVariant::Balanced ? static_cast<double>(spec.s)
                                             : static_cast<double>(n);
  stats.a = spec.p * scale;
  stats.b = spec.q * scale;
  return stats;
}

double expected_lambda(const ModelSpec& spec) {
  spec.validate();
  const int n = spec.n;
  if (n < 2) return 0.0;
  double mean_sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) mean_sum += spec.edge_probability(i, j);
  return 2.0 * mean_sum / (static_cast<double>(n) * (n - 1));
}

}  // namespace sbm
