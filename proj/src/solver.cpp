#include "sbm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "sbm/linalg.hpp"

namespace sbm {

FeasibleSet FeasibleSet::grothendieck_psd() { return FeasibleSet{}; }

FeasibleSet FeasibleSet::sum_constrained(double lambda) {
  FeasibleSet set;
  set.kind = Kind::SumConstrained;
  set.lambda = lambda;
  return set;
}

FeasibleSet FeasibleSet::k_community(int K, DiagMode diag_mode) {
  FeasibleSet set;
  set.kind = Kind::KCommunity;
  set.K = K;
  set.diag_mode = diag_mode;
  return set;
}

void FeasibleSet::validate(int n) const {
  switch (kind) {
    case Kind::GrothendieckPsd:
      break;
    case Kind::SumConstrained: {
      const double nn = static_cast<double>(n) * n;
      if (!(lambda > 0.0 && lambda <= nn))
        throw std::invalid_argument("FeasibleSet: lambda must lie in (0, n^2]");
      break;
    }
    case Kind::KCommunity:
      if (K < 2) throw std::invalid_argument("FeasibleSet: K must be >= 2");
      break;
  }
}

namespace {

// Projection onto {z in [0,1]^{n x n}, sum z = lambda}: clamp(W - mu) with
// the scalar shift found by bisection (the clamped sum is monotone in mu).
Eigen::MatrixXd project_box_sum(const Eigen::MatrixXd& w, double lambda) {
  const int n = static_cast<int>(w.rows());
  const double nn = static_cast<double>(n) * n;
  const double tol = 1e-12 * nn;
  auto clamped_sum = [&](double mu) {
    return (w.array() - mu).cwiseMax(0.0).cwiseMin(1.0).sum();
  };
  double lo = w.minCoeff() - 1.0;  // sum = n^2 >= lambda
  double hi = w.maxCoeff();        // sum = 0  <= lambda
  if (clamped_sum(lo) < lambda - tol || clamped_sum(hi) > lambda + tol)
    throw std::runtime_error("project_box_sum: bisection bracket failed");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double s = clamped_sum(mid);
    if (std::abs(s - lambda) <= tol) {
      lo = hi = mid;
      break;
    }
    (s > lambda ? lo : hi) = mid;
  }
  const double mu = 0.5 * (lo + hi);
  return (w.array() - mu).cwiseMax(0.0).cwiseMin(1.0).matrix();
}

}  // namespace

Eigen::MatrixXd project_entrywise(const Eigen::MatrixXd& w, const FeasibleSet& set) {
  const int n = static_cast<int>(w.rows());
  set.validate(n);
  Eigen::MatrixXd sym = 0.5 * (w + w.transpose());
  switch (set.kind) {
    case FeasibleSet::Kind::GrothendieckPsd:
      for (int i = 0; i < n; ++i) sym(i, i) = std::min(sym(i, i), 1.0);
      return sym;
    case FeasibleSet::Kind::SumConstrained:
      return project_box_sum(sym, set.lambda);
    case FeasibleSet::Kind::KCommunity: {
      const double floor = -1.0 / (set.K - 1);
      sym = sym.cwiseMax(floor);
      for (int i = 0; i < n; ++i)
        sym(i, i) = set.diag_mode == DiagMode::Equality ? 1.0 : std::min(sym(i, i), 1.0);
      return sym;
    }
  }
  throw std::logic_error("project_entrywise: unknown set");
}

double feasibility_violation(const Eigen::MatrixXd& z, const FeasibleSet& set) {
  const int n = static_cast<int>(z.rows());
  set.validate(n);
  double viol = (z - z.transpose()).cwiseAbs().maxCoeff();
  switch (set.kind) {
    case FeasibleSet::Kind::GrothendieckPsd:
      for (int i = 0; i < n; ++i) viol = std::max(viol, z(i, i) - 1.0);
      break;
    case FeasibleSet::Kind::SumConstrained:
      viol = std::max(viol, (-z.minCoeff()));
      viol = std::max(viol, z.maxCoeff() - 1.0);
      viol = std::max(viol, std::abs(z.sum() - set.lambda) /
                                (static_cast<double>(n) * n));
      break;
    case FeasibleSet::Kind::KCommunity: {
      const double floor = -1.0 / (set.K - 1);
      viol = std::max(viol, floor - z.minCoeff());
      for (int i = 0; i < n; ++i) {
        if (set.diag_mode == DiagMode::Equality)
          viol = std::max(viol, std::abs(z(i, i) - 1.0));
        else
          viol = std::max(viol, z(i, i) - 1.0);
      }
      break;
    }
  }
  const EigenDecomposition ed = eigh(z);
  viol = std::max(viol, std::max(-ed.eigenvalues(n - 1), 0.0) / n);
  return std::max(viol, 0.0);
}

namespace {

Eigen::MatrixXd warm_start(int n, const FeasibleSet& set) {
  if (set.kind == FeasibleSet::Kind::SumConstrained) {
    const double fill = set.lambda / (static_cast<double>(n) * n);
    return Eigen::MatrixXd::Constant(n, n, fill);
  }
  // Entrywise projection of the zero matrix: zero, except the unit diagonal
  // forced by the KCommunity equality mode.
  return project_entrywise(Eigen::MatrixXd::Zero(n, n), set);
}

}  // namespace

SdpSolution solve(const Eigen::MatrixXd& b, const FeasibleSet& set,
                  const SolverConfig& cfg) {
  const int n = static_cast<int>(b.rows());
  if (b.cols() != n) throw std::invalid_argument("solve: B must be square");
  if ((b - b.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("solve: B must be symmetric");
  set.validate(n);

  SdpSolution sol;
  sol.dual = Eigen::MatrixXd::Zero(n, n);

  if (b.isZero(0.0)) {
    // Any feasible point is optimal; return the warm start.
    sol.Z = warm_start(n, set);
    sol.converged = true;
    return sol;
  }

  const double rho = cfg.rho > 0.0 ? cfg.rho : 1.0 / n;
  const double alpha = cfg.over_relaxation;
  const Eigen::MatrixXd step = b / rho;

  Eigen::MatrixXd y = warm_start(n, set);
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, n);

  for (int it = 1; it <= cfg.max_iterations; ++it) {
    const Eigen::MatrixXd x = psd_project(y - u);
    const Eigen::MatrixXd x_relaxed = alpha * x + (1.0 - alpha) * y;
    const Eigen::MatrixXd y_next = project_entrywise(x_relaxed + u + step, set);
    u += x_relaxed - y_next;

    sol.primal_residual = (x - y_next).norm() / n;
    sol.dual_residual = rho * (y_next - y).norm() / n;
    y = y_next;
    sol.iterations = it;

    if (cfg.trace) {
      *cfg.trace << it << ',' << (b.cwiseProduct(y)).sum() << ','
                 << sol.primal_residual << ',' << sol.dual_residual << '\n';
    }
    if (sol.primal_residual <= cfg.tol_primal && sol.dual_residual <= cfg.tol_dual) {
      sol.converged = true;
      break;
    }
  }

  sol.Z = y;
  sol.objective = (b.cwiseProduct(y)).sum();
  sol.dual = rho * u;
  return sol;
}

namespace {

// max <G, Z> over an entrywise superset of the feasible set.
double box_support(const Eigen::MatrixXd& g, const FeasibleSet& set) {
  const int n = static_cast<int>(g.rows());
  switch (set.kind) {
    case FeasibleSet::Kind::GrothendieckPsd: {
      double total = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          total += (i == j) ? std::max(g(i, i), 0.0) : std::abs(g(i, j));
      return total;
    }
    case FeasibleSet::Kind::SumConstrained: {
      // maximize sum g_ij z_ij over z in [0,1]^{n^2}, sum z = lambda:
      // fill the largest entries first.
      std::vector<double> entries(g.data(), g.data() + g.size());
      std::sort(entries.begin(), entries.end(), std::greater<>());
      double remaining = set.lambda;
      double total = 0.0;
      for (double e : entries) {
        if (remaining <= 0.0) break;
        const double take = std::min(1.0, remaining);
        total += take * e;
        remaining -= take;
      }
      return total;
    }
    case FeasibleSet::Kind::KCommunity: {
      const double floor = -1.0 / (set.K - 1);
      double total = 0.0;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (i == j) {
            total += set.diag_mode == DiagMode::Equality ? g(i, i)
                                                         : std::max(g(i, i), 0.0);
          } else {
            total += std::max(g(i, j), floor * g(i, j));
          }
        }
      }
      return total;
    }
  }
  throw std::logic_error("box_support: unknown set");
}

}  // namespace

double duality_gap_certificate(const Eigen::MatrixXd& b, const FeasibleSet& set,
                               const SdpSolution& sol, double feas_tol) {
  const int n = static_cast<int>(b.rows());
  set.validate(n);
  if (feasibility_violation(sol.Z, set) > feas_tol)
    throw std::invalid_argument("duality_gap_certificate: Z infeasible beyond tolerance");

  // Split B = T + (B - T) with T = -dual. The psd side is bounded through
  // tr(TZ) <= max(lambda_max(T), 0) * tr(Z) with tr(Z) <= n; the rest is
  // bounded over the entrywise relaxation of the set.
  const Eigen::MatrixXd t = -0.5 * (sol.dual + sol.dual.transpose());
  const EigenDecomposition ed = eigh(t);
  const double psd_term = n * std::max(ed.eigenvalues(0), 0.0);
  const double box_term = box_support(b - t, set);
  return std::max(psd_term + box_term - sol.objective, 0.0);
}

}  // namespace sbm
