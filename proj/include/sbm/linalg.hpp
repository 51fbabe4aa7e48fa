#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace sbm {

/// Dense symmetric matrix. Construction symmetrizes the input and rejects
/// it (std::invalid_argument) if any entry pair differs by more than 1e-12.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(Eigen::MatrixXd m);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Eigen::MatrixXd& mat() const { return mat_; }
  operator const Eigen::MatrixXd&() const { return mat_; }

 private:
  Eigen::MatrixXd mat_;
};

/// Eigenvalues in nonincreasing order; eigenvectors in matching columns.
/// Ties broken by ascending original index, eigenvector signs fixed so the
/// largest-magnitude entry of each column is positive.
struct EigenDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};

EigenDecomposition eigh(const Eigen::MatrixXd& m);

/// Projection onto the PSD cone: negative eigenvalues clipped to zero.
Eigen::MatrixXd psd_project(const Eigen::MatrixXd& m);

/// Exact l_infinity -> l_1 norm, max_{s in {-1,1}^n} ||Bs||_1, by Gray-code
/// enumeration over s (the second sign vector is sign(Bs)). Requires n <= 26.
double cut_norm_exact(const Eigen::MatrixXd& b);

/// Lower bound on the l_infinity -> l_1 norm: best local maximum of
/// single-coordinate-flip ascent from `restarts` random sign pairs.
double cut_norm_lower(const Eigen::MatrixXd& b, int restarts, std::uint64_t seed);

double frobenius_sq(const Eigen::MatrixXd& m);
double l1_entrywise(const Eigen::MatrixXd& m);
double linf_entrywise(const Eigen::MatrixXd& m);

}  // namespace sbm
