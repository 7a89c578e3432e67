#include "polysafe/geometry.hpp"

#include <cmath>
#include <utility>

#include "polysafe/errors.hpp"
#include "polysafe/rng.hpp"
#include "polysafe/solver.hpp"

namespace polysafe {

Polytope::Polytope(Eigen::MatrixXd A_, Eigen::VectorXd b_) : A(std::move(A_)), b(std::move(b_)) {
  if (A.rows() != b.size()) throw DimensionMismatch("polytope: row count and rhs length differ");
}

Polytope stack(const Polytope& p, const Polytope& q) {
  if (p.dim() != q.dim()) throw DimensionMismatch("stack: ambient dimensions differ");
  Polytope r;
  r.A.resize(p.rows() + q.rows(), p.dim());
  r.A << p.A, q.A;
  r.b.resize(p.rows() + q.rows());
  r.b << p.b, q.b;
  return r;
}

Polytope box_input_polytope(int m, double u_max) {
  if (m < 1) throw InvalidParameter("box_input_polytope: dimension must be positive");
  if (!(u_max > 0)) throw InvalidParameter("box_input_polytope: u_max must be positive");
  Polytope p;
  p.A.setZero(2 * m, m);
  p.b.setConstant(2 * m, u_max);
  for (int i = 0; i < m; ++i) {
    p.A(2 * i, i) = 1.0;
    p.A(2 * i + 1, i) = -1.0;
  }
  return p;
}

bool contains(const Polytope& p, const Eigen::VectorXd& u, double tol) {
  if (u.size() != p.dim()) throw DimensionMismatch("contains: point dimension differs");
  if (p.rows() == 0) return true;
  return ((p.b - p.A * u).array() >= -tol).all();
}

ChebyshevResult chebyshev(const Polytope& p) {
  const int n = p.dim();
  const int rows = p.rows();
  if (n == 0) throw InvalidParameter("chebyshev: zero-dimensional polytope");
  LinearProgram lp;
  lp.c = Eigen::VectorXd::Zero(n + 1);
  lp.c[n] = -1.0;  // maximize the ball radius
  lp.constraints.A.setZero(rows + 1, n + 1);
  lp.constraints.b.resize(rows + 1);
  for (int i = 0; i < rows; ++i) {
    lp.constraints.A.block(i, 0, 1, n) = p.A.row(i);
    lp.constraints.A(i, n) = p.A.row(i).norm();
    lp.constraints.b[i] = p.b[i];
  }
  lp.constraints.A(rows, n) = -1.0;
  lp.constraints.b[rows] = 0.0;

  const SolveOutcome sol = solve_lp(lp);
  ChebyshevResult out;
  switch (sol.status) {
    case SolveStatus::Optimal:
      out.feasible = true;
      out.center = sol.point.head(n);
      out.radius = sol.point[n];
      return out;
    case SolveStatus::Infeasible:
      return out;
    case SolveStatus::Unbounded:
      throw UnboundedRadius("chebyshev: inscribed ball radius is unbounded");
    default:
      throw InvalidParameter("chebyshev: simplex iteration limit reached");
  }
}

Polytope erode(const Polytope& p, double gamma) {
  if (gamma < 0) throw InvalidParameter("erode: gamma must be nonnegative");
  Polytope r = p;
  for (int i = 0; i < p.rows(); ++i) r.b[i] -= gamma * p.A.row(i).norm();
  return r;
}

Projection project_point(const Polytope& p, const Eigen::VectorXd& y) {
  if (y.size() != p.dim()) throw DimensionMismatch("project_point: point dimension differs");
  QuadraticProgram qp;
  const int n = p.dim();
  qp.Q = 2.0 * Eigen::MatrixXd::Identity(n, n);
  qp.c = -2.0 * y;
  qp.constraints = p;
  const SolveOutcome sol = solve_qp(qp);
  if (sol.status == SolveStatus::Infeasible)
    throw EmptyPolytope("project_point: polytope is empty");
  if (sol.status != SolveStatus::Optimal)
    throw InvalidParameter("project_point: QP did not converge");
  Projection out;
  out.point = sol.point;
  out.distance = (sol.point - y).norm();
  return out;
}

Eigen::VectorXd support_point(const Polytope& p, const Eigen::VectorXd& d) {
  if (d.size() != p.dim()) throw DimensionMismatch("support_point: direction dimension differs");
  const SolveOutcome sol = solve_lp({-d, p});
  switch (sol.status) {
    case SolveStatus::Optimal:
      return sol.point;
    case SolveStatus::Infeasible:
      throw EmptyPolytope("support_point: polytope is empty");
    case SolveStatus::Unbounded:
      throw UnboundedDirection("support_point: polytope is unbounded along the direction");
    default:
      throw InvalidParameter("support_point: simplex iteration limit reached");
  }
}

double directed_gap(const Polytope& p1, const Polytope& p2, int n_dirs, std::uint64_t seed) {
  if (p1.dim() != p2.dim()) throw DimensionMismatch("directed_gap: ambient dimensions differ");
  if (n_dirs < 1) throw InvalidParameter("directed_gap: need at least one direction");
  Rng rng(seed);
  double gap = 0.0;
  for (int k = 0; k < n_dirs; ++k) {
    const Eigen::VectorXd d = rng.unit_vector(p1.dim());
    const Eigen::VectorXd v = support_point(p1, d);
    gap = std::max(gap, project_point(p2, v).distance);
  }
  return gap;
}

}  // namespace polysafe
