#include "sbm/linalg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "sbm/rng.hpp"

#ifdef SBM_USE_LAPACKE
#include <lapacke.h>
#endif

namespace sbm {

SymmetricMatrix::SymmetricMatrix(Eigen::MatrixXd m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("SymmetricMatrix: matrix must be square");
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12)
    throw std::invalid_argument("SymmetricMatrix: asymmetry exceeds 1e-12");
  mat_ = 0.5 * (m + m.transpose());
}

namespace {

// Full symmetric eigendecomposition, eigenvalues ascending. LAPACK's
// divide-and-conquer routine is used when available (it is several times
// faster at the n ~ 300 sizes the solver iterates on).
void eigh_ascending(const Eigen::MatrixXd& sym, Eigen::VectorXd& values,
                    Eigen::MatrixXd& vectors) {
#ifdef SBM_USE_LAPACKE
  const int n = static_cast<int>(sym.rows());
  vectors = sym;
  values.resize(n);
  const int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, vectors.data(),
                                  n, values.data());
  if (info == 0) return;
  // fall through to the Eigen path on failure
#endif
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigh: eigensolver failed to converge");
  values = solver.eigenvalues();
  vectors = solver.eigenvectors();
}

}  // namespace

EigenDecomposition eigh(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eigh: matrix must be square");
  if (!m.allFinite()) throw std::invalid_argument("eigh: non-finite entries");
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  eigh_ascending(sym, values, vectors);

  const int n = static_cast<int>(m.rows());
  // Ascending input; emit descending, stable in the original index so equal
  // eigenvalues keep a deterministic order.
  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (int c = 0; c < n; ++c) {
    const int src = n - 1 - c;
    out.eigenvalues(c) = values(src);
    Eigen::VectorXd v = vectors.col(src);
    int arg = 0;
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
      const double mag = std::abs(v(i));
      if (mag > best + 1e-14) {
        best = mag;
        arg = i;
      }
    }
    if (v(arg) < 0.0) v = -v;
    out.eigenvectors.col(c) = v;
  }
  return out;
}

Eigen::MatrixXd psd_project(const Eigen::MatrixXd& m) {
  const EigenDecomposition ed = eigh(m);
  Eigen::VectorXd clipped = ed.eigenvalues.cwiseMax(0.0);
  Eigen::MatrixXd out = ed.eigenvectors * clipped.asDiagonal() * ed.eigenvectors.transpose();
  // clean up round-off asymmetry
  return 0.5 * (out + out.transpose());
}

double cut_norm_exact(const Eigen::MatrixXd& b) {
  const int n = static_cast<int>(b.rows());
  if (b.cols() != n) throw std::invalid_argument("cut_norm_exact: matrix must be square");
  if (n > 26) throw std::invalid_argument("cut_norm_exact: n must be <= 26");
  if (n == 0) return 0.0;

  // ||Bs||_1 is invariant under s -> -s, so fix s_0 = +1 and Gray-code the
  // remaining n-1 coordinates; each step updates v = B s in O(n).
  Eigen::VectorXd v = b.rowwise().sum();  // s = (1,...,1)
  double best = v.cwiseAbs().sum();
  if (n == 1) return best;

  std::vector<double> sign(static_cast<std::size_t>(n), 1.0);
  const std::uint64_t steps = (1ULL << (n - 1)) - 1;
  for (std::uint64_t it = 1; it <= steps; ++it) {
    // Gray code flips the position of the lowest set bit of the counter.
    const int bit = static_cast<int>(std::countr_zero(it));
    const int j = bit + 1;  // coordinate 0 stays fixed
    sign[static_cast<std::size_t>(j)] = -sign[static_cast<std::size_t>(j)];
    v += (2.0 * sign[static_cast<std::size_t>(j)]) * b.col(j);
    best = std::max(best, v.cwiseAbs().sum());
  }
  return best;
}

namespace {

// One pass of single-coordinate-flip ascent on f(s,t) = s^T B t.
// Returns the locally maximal value.
double ascend(const Eigen::MatrixXd& b, Eigen::VectorXd& s, Eigen::VectorXd& t) {
  const int n = static_cast<int>(b.rows());
  Eigen::VectorXd bt = b * t;              // f = s . bt
  Eigen::VectorXd bs = b.transpose() * s;  // f = t . bs
  bool improved = true;
  while (improved) {
    improved = false;
    for (int i = 0; i < n; ++i) {
      if (s(i) * bt(i) < 0.0) {
        s(i) = -s(i);
        bs += 2.0 * s(i) * b.row(i).transpose();
        improved = true;
      }
    }
    for (int j = 0; j < n; ++j) {
      if (t(j) * bs(j) < 0.0) {
        t(j) = -t(j);
        bt += 2.0 * t(j) * b.col(j);
        improved = true;
      }
    }
  }
  return s.dot(bt);
}

}  // namespace

double cut_norm_lower(const Eigen::MatrixXd& b, int restarts, std::uint64_t seed) {
  const int n = static_cast<int>(b.rows());
  if (b.cols() != n) throw std::invalid_argument("cut_norm_lower: matrix must be square");
  if (n == 0) return 0.0;

  double best = 0.0;
  for (int r = 0; r < std::max(restarts, 1); ++r) {
    SplitMix64 rng(derive_stream(seed, static_cast<std::uint64_t>(r)));
    Eigen::VectorXd s(n), t(n);
    for (int i = 0; i < n; ++i) s(i) = rng.bernoulli(0.5) ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i) t(i) = rng.bernoulli(0.5) ? 1.0 : -1.0;
    best = std::max(best, ascend(b, s, t));
  }
  return best;
}

double frobenius_sq(const Eigen::MatrixXd& m) { return m.squaredNorm(); }

double l1_entrywise(const Eigen::MatrixXd& m) { return m.cwiseAbs().sum(); }

double linf_entrywise(const Eigen::MatrixXd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace sbm
