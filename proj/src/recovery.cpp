#include "sbm/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "sbm/linalg.hpp"
#include "sbm/rng.hpp"

namespace sbm {

double estimate_lambda(const AdjacencyMatrix& a) {
  const int n = static_cast<int>(a.rows());
  if (n < 2) return 0.0;
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) acc += a(i, j);
  return 2.0 * acc / (static_cast<double>(n) * (n - 1));
}

double lambda_cluster_count(const CommunityAssignment& assignment) {
  double total = 0.0;
  for (int size : assignment.community_sizes())
    total += static_cast<double>(size) * size;
  return total;
}

std::pair<Eigen::VectorXd, CommunityAssignment> round_leading_eigenvector(
    const Eigen::MatrixXd& zhat) {
  const int n = static_cast<int>(zhat.rows());
  const EigenDecomposition ed = eigh(zhat);
  Eigen::VectorXd xhat = std::sqrt(static_cast<double>(n)) * ed.eigenvectors.col(0);
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    labels[static_cast<std::size_t>(i)] = xhat(i) >= 0.0 ? 1 : 2;
  return {std::move(xhat), CommunityAssignment(std::move(labels))};
}

Eigen::MatrixXd spectral_projection(const Eigen::MatrixXd& zhat, int K,
                                    RankMode rank_mode) {
  const int n = static_cast<int>(zhat.rows());
  if (K < 2) throw std::invalid_argument("spectral_projection: K must be >= 2");
  const int r = rank_mode == RankMode::TwoKMinus3 ? 2 * K - 3 : K - 1;
  if (r < 1 || r >= n)
    throw std::invalid_argument("spectral_projection: rank must satisfy 1 <= r < n");
  const EigenDecomposition ed = eigh(zhat);
  const Eigen::MatrixXd v = ed.eigenvectors.leftCols(r);
  Eigen::MatrixXd phat = v * v.transpose();
  return 0.5 * (phat + phat.transpose());
}

namespace {

struct KMeansRun {
  std::vector<int> labels;
  double wcss = std::numeric_limits<double>::infinity();
  bool degenerate = false;
};

KMeansRun kmeans_once(const Eigen::MatrixXd& rows, int k, SplitMix64& rng) {
  const int n = static_cast<int>(rows.rows());
  const int d = static_cast<int>(rows.cols());
  Eigen::MatrixXd centers(k, d);

  // k-means++ seeding
  std::vector<double> dist2(static_cast<std::size_t>(n),
                            std::numeric_limits<double>::infinity());
  int first = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
  centers.row(0) = rows.row(first);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d2 = (rows.row(i) - centers.row(c - 1)).squaredNorm();
      dist2[static_cast<std::size_t>(i)] = std::min(dist2[static_cast<std::size_t>(i)], d2);
      total += dist2[static_cast<std::size_t>(i)];
    }
    int pick = n - 1;
    if (total > 0.0) {
      double target = rng.next_double() * total;
      for (int i = 0; i < n; ++i) {
        target -= dist2[static_cast<std::size_t>(i)];
        if (target <= 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
    }
    centers.row(c) = rows.row(pick);
  }

  KMeansRun run;
  run.labels.assign(static_cast<std::size_t>(n), 0);
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d2 = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d2 = (rows.row(i) - centers.row(c)).squaredNorm();
        if (d2 < best_d2) {
          best_d2 = d2;
          best = c;
        }
      }
      if (run.labels[static_cast<std::size_t>(i)] != best) {
        run.labels[static_cast<std::size_t>(i)] = best;
        changed = true;
      }
    }
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, d);
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (int i = 0; i < n; ++i) {
      sums.row(run.labels[static_cast<std::size_t>(i)]) += rows.row(i);
      ++counts[static_cast<std::size_t>(run.labels[static_cast<std::size_t>(i)])];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] == 0) {
        run.degenerate = true;
        return run;
      }
      centers.row(c) = sums.row(c) / counts[static_cast<std::size_t>(c)];
    }
    if (!changed && iter > 0) break;
  }

  run.wcss = 0.0;
  for (int i = 0; i < n; ++i)
    run.wcss += (rows.row(i) - centers.row(run.labels[static_cast<std::size_t>(i)])).squaredNorm();
  run.degenerate = false;
  return run;
}

}  // namespace

CommunityAssignment labels_from_projection(const Eigen::MatrixXd& phat, int K,
                                           std::uint64_t seed) {
  const int n = static_cast<int>(phat.rows());
  if (K < 1) throw std::invalid_argument("labels_from_projection: K must be >= 1");
  if (K == 1)
    return CommunityAssignment(std::vector<int>(static_cast<std::size_t>(n), 1));

  constexpr int kRestarts = 20;
  KMeansRun best;
  for (int r = 0; r < kRestarts; ++r) {
    SplitMix64 rng(derive_stream(seed, static_cast<std::uint64_t>(r)));
    KMeansRun run = kmeans_once(phat, K, rng);
    if (!run.degenerate && run.wcss < best.wcss) best = run;
  }
  if (best.labels.empty() || !std::isfinite(best.wcss))
    throw std::runtime_error("labels_from_projection: all k-means restarts degenerate");
  std::vector<int> labels(best.labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = best.labels[i] + 1;
  return CommunityAssignment(std::move(labels));
}

namespace {

// Exact max-weight assignment on a square cost matrix (Hungarian algorithm
// with potentials, O(k^3)); returns the maximal total agreement.
double assignment_max(const Eigen::MatrixXd& weight) {
  const int k = static_cast<int>(weight.rows());
  // Standard minimization form on negated weights, 1-based arrays.
  std::vector<double> u(static_cast<std::size_t>(k + 1), 0.0);
  std::vector<double> v(static_cast<std::size_t>(k + 1), 0.0);
  std::vector<int> match(static_cast<std::size_t>(k + 1), 0);
  std::vector<int> way(static_cast<std::size_t>(k + 1), 0);
  const double inf = std::numeric_limits<double>::infinity();

  for (int i = 1; i <= k; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(k + 1), inf);
    std::vector<char> used(static_cast<std::size_t>(k + 1), 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = match[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= k; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = -weight(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                           v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= k; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (match[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  double total = 0.0;
  for (int j = 1; j <= k; ++j)
    total += weight(match[static_cast<std::size_t>(j)] - 1, j - 1);
  return total;
}

}  // namespace

double misclassification(const CommunityAssignment& est,
                         const CommunityAssignment& truth) {
  const int n = truth.size();
  if (est.size() != n)
    throw std::invalid_argument("misclassification: assignments differ in length");
  if (n == 0) return 0.0;
  const int k = std::max(est.community_count(), truth.community_count());
  Eigen::MatrixXd confusion = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < n; ++i)
    confusion(est.label(i) - 1, truth.label(i) - 1) += 1.0;
  const double agreement = assignment_max(confusion);
  return 1.0 - agreement / n;
}

std::pair<double, double> matrix_errors(const Eigen::MatrixXd& zhat,
                                        const GroundTruth& truth,
                                        ErrorTarget target) {
  Eigen::MatrixXd ref;
  if (target == ErrorTarget::XxT) {
    if (!truth.has_x)
      throw std::invalid_argument("matrix_errors: xxT target needs a two-class truth");
    ref = truth.x * truth.x.transpose();
  } else {
    ref = truth.Z;
  }
  if (ref.rows() != zhat.rows() || ref.cols() != zhat.cols())
    throw std::invalid_argument("matrix_errors: shape mismatch");
  const Eigen::MatrixXd diff = zhat - ref;
  return {frobenius_sq(diff), l1_entrywise(diff)};
}

}  // namespace sbm
