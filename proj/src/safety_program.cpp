#include "polysafe/safety_program.hpp"

#include <utility>

#include "polysafe/errors.hpp"

namespace polysafe {

ObjectiveChoice ObjectiveChoice::feasibility() { return {}; }

ObjectiveChoice ObjectiveChoice::linear_cost_of(Eigen::VectorXd c) {
  ObjectiveChoice o;
  o.kind = Kind::LinearCost;
  o.linear_cost = std::move(c);
  return o;
}

ObjectiveChoice ObjectiveChoice::tracking(Eigen::VectorXd u_nom, Eigen::VectorXd weights) {
  ObjectiveChoice o;
  o.kind = Kind::Tracking;
  o.u_nom = std::move(u_nom);
  o.weights = std::move(weights);
  return o;
}

Polytope lifted_polytope(const SafetySpec& spec, const SystemDynamics& sys,
                         const Eigen::VectorXd& x) {
  if (sys.n != spec.state_dim() || sys.m != spec.input_dim())
    throw DimensionMismatch("lifted_polytope: system and spec dimensions disagree");
  if (x.size() != sys.n) throw DimensionMismatch("lifted_polytope: state dimension differs");

  const int m = sys.m;
  const int N = spec.num_barriers();
  const int p = spec.input_set.rows();

  // rows: N barrier rows, p input rows, N delta lower bounds, N delta caps
  Polytope P;
  P.A.setZero(N + p + 2 * N, m + N);
  P.b.resize(N + p + 2 * N);
  for (int i = 0; i < N; ++i) {
    const LieDerivatives ld = lie_derivatives(sys, spec.barriers[i], x);
    P.A.block(i, 0, 1, m) = ld.Lg;
    P.A(i, m + i) = spec.barriers[i].value(x);
    P.b[i] = -ld.Lf;
  }
  P.A.block(N, 0, p, m) = spec.input_set.A;
  P.b.segment(N, p) = spec.input_set.b;
  for (int i = 0; i < N; ++i) {
    P.A(N + p + i, m + i) = -1.0;
    P.b[N + p + i] = 0.0;
    P.A(N + p + N + i, m + i) = 1.0;
    P.b[N + p + N + i] = kDeltaCap;
  }
  return P;
}

SafetyProgramResult solve_safety_program(const SafetySpec& spec, const SystemDynamics& sys,
                                         const Eigen::VectorXd& x,
                                         const ObjectiveChoice& objective) {
  const int m = sys.m;
  const int N = spec.num_barriers();
  const Polytope lifted = lifted_polytope(spec, sys, x);

  SafetyProgramResult out;
  switch (objective.kind) {
    case ObjectiveChoice::Kind::Feasibility: {
      const ChebyshevResult cheb = chebyshev(lifted);
      if (!cheb.feasible) {
        out.status = SolveStatus::Infeasible;
        return out;
      }
      out.status = SolveStatus::Optimal;
      out.v = cheb.center.head(m);
      out.delta = cheb.center.tail(N);
      out.lifted_radius = cheb.radius;
      return out;
    }
    case ObjectiveChoice::Kind::LinearCost: {
      if (objective.linear_cost.size() != m + N)
        throw DimensionMismatch("safety program: linear cost must cover (v, delta)");
      const SolveOutcome sol = solve_lp({objective.linear_cost, lifted});
      out.status = sol.status;
      if (sol.status == SolveStatus::Optimal) {
        out.v = sol.point.head(m);
        out.delta = sol.point.tail(N);
        out.objective = sol.objective;
      }
      return out;
    }
    case ObjectiveChoice::Kind::Tracking: {
      if (objective.u_nom.size() != m)
        throw DimensionMismatch("safety program: tracking target dimension differs");
      Eigen::VectorXd w = objective.weights;
      if (w.size() == 0) w = Eigen::VectorXd::Ones(N);
      if (w.size() != N)
        throw DimensionMismatch("safety program: one delta weight per barrier required");
      if ((w.array() <= 0).any())
        throw InvalidParameter("safety program: delta weights must be positive");

      QuadraticProgram qp;
      qp.Q = Eigen::MatrixXd::Zero(m + N, m + N);
      qp.Q.topLeftCorner(m, m).setIdentity();
      qp.Q.bottomRightCorner(N, N) = w.asDiagonal();
      qp.c = Eigen::VectorXd::Zero(m + N);
      qp.c.head(m) = -objective.u_nom;
      qp.constraints = lifted;
      const SolveOutcome sol = solve_qp(qp);
      out.status = sol.status;
      if (sol.status == SolveStatus::Optimal) {
        out.v = sol.point.head(m);
        out.delta = sol.point.tail(N);
        out.objective = sol.objective + 0.5 * objective.u_nom.squaredNorm();
      }
      return out;
    }
  }
  return out;
}

}  // namespace polysafe
