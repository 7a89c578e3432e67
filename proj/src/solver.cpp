#include "polysafe/solver.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <vector>

#include "polysafe/errors.hpp"

namespace polysafe {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::Unbounded: return "Unbounded";
    case SolveStatus::IterationLimit: return "IterationLimit";
  }
  return "Unknown";
}

namespace {

constexpr double kPivTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr double kTieTol = 1e-12;

// tableau simplex over the equality form M X = rhs, X >= 0
struct Tableau {
  Eigen::MatrixXd T;  // rows x (cols+1), last column is the rhs
  std::vector<int> basis;
  int rows = 0;
  int cols = 0;

  void pivot(int r, int c) {
    T.row(r) /= T(r, c);
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      const double f = T(i, c);
      if (f != 0.0) T.row(i) -= f * T.row(r);
    }
    basis[r] = c;
  }

  // Bland's rule throughout: lowest eligible entering column, ties in the
  // ratio test broken by lowest basic index. 0 optimal, 1 unbounded, 2 limit.
  int run(const Eigen::VectorXd& cost, const std::vector<char>& allowed, int max_pivots,
          int* pivots) {
    Eigen::RowVectorXd cb(rows);
    while (true) {
      for (int i = 0; i < rows; ++i) cb[i] = cost[basis[i]];
      int enter = -1;
      for (int j = 0; j < cols; ++j) {
        if (!allowed[j]) continue;
        const double rc = cost[j] - cb.dot(T.col(j));
        if (rc < -kCostTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return 0;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < rows; ++i) {
        const double a = T(i, enter);
        if (a <= kPivTol) continue;
        const double ratio = T(i, cols) / a;
        if (ratio < best - kTieTol) {
          best = ratio;
          leave = i;
        } else if (ratio <= best + kTieTol && leave >= 0 && basis[i] < basis[leave]) {
          leave = i;
          if (ratio < best) best = ratio;
        }
      }
      if (leave < 0) return 1;
      if (++*pivots > max_pivots) return 2;
      pivot(leave, enter);
    }
  }
};

}  // namespace

SolveOutcome solve_lp(const LinearProgram& lp) {
  const Eigen::MatrixXd& A = lp.constraints.A;
  const Eigen::VectorXd& b = lp.constraints.b;
  const int n = static_cast<int>(lp.c.size());
  const int p = static_cast<int>(A.rows());
  if (A.cols() != n || b.size() != p)
    throw DimensionMismatch("solve_lp: cost/constraint dimensions disagree");
  if (n == 0) throw InvalidParameter("solve_lp: empty decision vector");

  // free x split as x = x+ - x-, one slack per row; rows with negative rhs
  // are negated and given an artificial for the phase-1 basis
  int n_art = 0;
  std::vector<int> art_of_row(p, -1);
  for (int i = 0; i < p; ++i)
    if (b[i] < 0) art_of_row[i] = n_art++;

  const int cols = 2 * n + p + n_art;
  Tableau tb;
  tb.rows = p;
  tb.cols = cols;
  tb.T.setZero(p, cols + 1);
  tb.basis.resize(p);
  for (int i = 0; i < p; ++i) {
    const double sgn = (b[i] < 0) ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) {
      tb.T(i, j) = sgn * A(i, j);
      tb.T(i, n + j) = -sgn * A(i, j);
    }
    tb.T(i, 2 * n + i) = sgn;
    tb.T(i, cols) = sgn * b[i];
    if (art_of_row[i] >= 0) {
      tb.T(i, 2 * n + p + art_of_row[i]) = 1.0;
      tb.basis[i] = 2 * n + p + art_of_row[i];
    } else {
      tb.basis[i] = 2 * n + i;
    }
  }

  const int max_pivots = 10 * (p + cols);
  int pivots = 0;
  std::vector<char> allowed(cols, 1);

  SolveOutcome out;
  if (n_art > 0) {
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(cols);
    for (int j = 2 * n + p; j < cols; ++j) phase1[j] = 1.0;
    const int rc = tb.run(phase1, allowed, max_pivots, &pivots);
    if (rc == 2) {
      out.status = SolveStatus::IterationLimit;
      return out;
    }
    double infeas = 0.0;
    for (int i = 0; i < p; ++i)
      if (tb.basis[i] >= 2 * n + p) infeas += tb.T(i, cols);
    if (infeas > 1e-8) {
      out.status = SolveStatus::Infeasible;
      return out;
    }
    // drive leftover artificials (basic at zero) out where a pivot exists;
    // rows with no eligible pivot are redundant and stay inert
    for (int i = 0; i < p; ++i) {
      if (tb.basis[i] < 2 * n + p) continue;
      for (int j = 0; j < 2 * n + p; ++j) {
        if (std::abs(tb.T(i, j)) > kPivTol) {
          tb.pivot(i, j);
          ++pivots;
          break;
        }
      }
    }
    for (int j = 2 * n + p; j < cols; ++j) allowed[j] = 0;
  }

  Eigen::VectorXd cost = Eigen::VectorXd::Zero(cols);
  for (int j = 0; j < n; ++j) {
    cost[j] = lp.c[j];
    cost[n + j] = -lp.c[j];
  }
  const int rc = tb.run(cost, allowed, max_pivots, &pivots);
  if (rc == 2) {
    out.status = SolveStatus::IterationLimit;
    return out;
  }
  if (rc == 1) {
    out.status = SolveStatus::Unbounded;
    return out;
  }

  Eigen::VectorXd X = Eigen::VectorXd::Zero(cols);
  for (int i = 0; i < p; ++i) X[tb.basis[i]] = tb.T(i, cols);
  Eigen::VectorXd x(n);
  for (int j = 0; j < n; ++j) x[j] = X[j] - X[n + j];

  out.status = SolveStatus::Optimal;
  out.point = x;
  out.objective = lp.c.dot(x);
  double viol = 0.0;
  for (int i = 0; i < p; ++i) viol = std::max(viol, A.row(i).dot(x) - b[i]);
  out.kkt_residual = std::max(0.0, viol);
  return out;
}

SolveOutcome solve_qp(const QuadraticProgram& qp) {
  const Eigen::MatrixXd& A = qp.constraints.A;
  const Eigen::VectorXd& b = qp.constraints.b;
  const int n = static_cast<int>(qp.Q.rows());
  const int p = static_cast<int>(A.rows());
  if (qp.Q.cols() != n || qp.c.size() != n || (p > 0 && A.cols() != n))
    throw DimensionMismatch("solve_qp: objective/constraint dimensions disagree");
  if (n == 0) throw InvalidParameter("solve_qp: empty decision vector");

  const double qscale = std::max(1.0, qp.Q.cwiseAbs().maxCoeff());
  if ((qp.Q - qp.Q.transpose()).cwiseAbs().maxCoeff() > 1e-10 * qscale)
    throw InvalidParameter("solve_qp: Q must be symmetric");

  SolveOutcome out;
  Eigen::MatrixXd Q = qp.Q;
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q);
    const double mineig = es.eigenvalues().minCoeff();
    if (mineig < 1e-10) {
      if (mineig < -1e-8) throw InvalidParameter("solve_qp: Q is not positive semidefinite");
      Q += 1e-9 * Eigen::MatrixXd::Identity(n, n);
      out.ridge_applied = true;
    }
  }

  // phase-1 feasible point from the LP machinery
  SolveOutcome feas = solve_lp({Eigen::VectorXd::Zero(n), qp.constraints});
  if (feas.status != SolveStatus::Optimal) {
    out.status = feas.status;
    return out;
  }
  Eigen::VectorXd z = feas.point;

  // initial working set: active rows, greedily kept linearly independent
  std::vector<int> W;
  std::vector<char> in_w(p, 0);
  {
    Eigen::MatrixXd wrows(0, n);
    for (int i = 0; i < p && static_cast<int>(W.size()) < n; ++i) {
      if (std::abs(A.row(i).dot(z) - b[i]) > 1e-8) continue;
      Eigen::MatrixXd cand(W.size() + 1, n);
      if (!W.empty()) cand.topRows(W.size()) = wrows;
      cand.row(W.size()) = A.row(i);
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(cand.transpose());
      qr.setThreshold(1e-10);
      if (qr.rank() == static_cast<Eigen::Index>(W.size()) + 1) {
        W.push_back(i);
        in_w[i] = 1;
        wrows = cand;
      }
    }
  }

  const int max_iter = 100 * n;
  Eigen::VectorXd lambda;
  out.status = SolveStatus::IterationLimit;
  for (int iter = 0; iter < max_iter; ++iter) {
    const int w = static_cast<int>(W.size());
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + w, n + w);
    K.topLeftCorner(n, n) = Q;
    for (int k = 0; k < w; ++k) {
      K.block(0, n + k, n, 1) = A.row(W[k]).transpose();
      K.block(n + k, 0, 1, n) = A.row(W[k]);
    }
    Eigen::VectorXd rhs(n + w);
    rhs.head(n) = -(Q * z + qp.c);
    rhs.tail(w).setZero();
    const Eigen::VectorXd sol = K.partialPivLu().solve(rhs);
    const Eigen::VectorXd pdir = sol.head(n);
    lambda = sol.tail(w);

    if (pdir.lpNorm<Eigen::Infinity>() <= 1e-11) {
      int drop = -1;
      for (int k = 0; k < w; ++k) {
        if (lambda[k] < -1e-9 && (drop < 0 || W[k] < W[drop])) drop = k;
      }
      if (drop < 0) {
        out.status = SolveStatus::Optimal;
        break;
      }
      in_w[W[drop]] = 0;
      W.erase(W.begin() + drop);
      continue;
    }

    double alpha = 1.0;
    int block = -1;
    for (int i = 0; i < p; ++i) {
      if (in_w[i]) continue;
      const double ad = A.row(i).dot(pdir);
      if (ad <= 1e-11) continue;
      const double a = std::max(0.0, b[i] - A.row(i).dot(z)) / ad;
      if (a < alpha - kTieTol) {
        alpha = a;
        block = i;
      } else if (a <= alpha + kTieTol && block >= 0 && i < block) {
        block = i;
        alpha = std::min(alpha, a);
      }
    }
    z += alpha * pdir;
    if (block >= 0) {
      W.push_back(block);
      in_w[block] = 1;
    }
  }

  out.point = z;
  out.objective = 0.5 * z.dot(qp.Q * z) + qp.c.dot(z);

  Eigen::VectorXd stat = qp.Q * z + qp.c;
  double resid = 0.0;
  const int nmul = std::min(static_cast<int>(W.size()), static_cast<int>(lambda.size()));
  for (int k = 0; k < nmul; ++k) {
    stat += lambda[k] * A.row(W[k]).transpose();
    resid = std::max(resid, std::abs(lambda[k] * (A.row(W[k]).dot(z) - b[W[k]])));
    resid = std::max(resid, -lambda[k]);
  }
  resid = std::max(resid, stat.lpNorm<Eigen::Infinity>());
  for (int i = 0; i < p; ++i) resid = std::max(resid, A.row(i).dot(z) - b[i]);
  out.kkt_residual = resid;
  return out;
}

}  // namespace polysafe
