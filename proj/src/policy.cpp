#include "polysafe/policy.hpp"

#include <utility>

#include "polysafe/errors.hpp"

namespace polysafe {

Policy Policy::chebyshev_center() {
  Policy p;
  p.kind = Kind::ChebyshevCenter;
  return p;
}

Policy Policy::qp_tracking(Eigen::VectorXd u_nom, Eigen::VectorXd weights) {
  Policy p;
  p.kind = Kind::QPTracking;
  p.u_nom = std::move(u_nom);
  p.weights = std::move(weights);
  return p;
}

Policy Policy::qp_tracking_feedback(Eigen::MatrixXd feedback, Eigen::VectorXd weights) {
  Policy p;
  p.kind = Kind::QPTracking;
  p.feedback = std::move(feedback);
  p.weights = std::move(weights);
  return p;
}

Policy Policy::lp_vertex(Eigen::VectorXd cost) {
  if (cost.size() == 0) throw InvalidParameter("policy: vertex cost must be nonempty");
  Policy p;
  p.kind = Kind::LPVertex;
  p.cost = std::move(cost);
  return p;
}

Policy Policy::rotating_vertex(std::vector<Eigen::VectorXd> costs, int period) {
  if (costs.empty()) throw InvalidParameter("policy: need at least one rotating cost");
  if (period < 1) throw InvalidParameter("policy: period must be positive");
  Policy p;
  p.kind = Kind::RotatingVertex;
  p.costs = std::move(costs);
  p.period = period;
  return p;
}

Policy Policy::safety_program(ObjectiveChoice objective) {
  Policy p;
  p.kind = Kind::SafetyProgram;
  p.objective = std::move(objective);
  return p;
}

namespace {

Eigen::VectorXd vertex_toward(const Polytope& k_gamma, const Eigen::VectorXd& cost) {
  try {
    return support_point(k_gamma, -cost);
  } catch (const EmptyPolytope&) {
    throw EmptyFeasibleSet("policy: eroded feasible set is empty");
  }
}

}  // namespace

Eigen::VectorXd select_control(const Policy& policy, const SafetySpec& spec,
                               const SystemDynamics& sys, const Eigen::VectorXd& x,
                               std::int64_t step_index, double gamma,
                               std::vector<PolicyEvent>* events) {
  const Polytope k_gamma = build_K_gamma(spec, sys, x, gamma);

  switch (policy.kind) {
    case Policy::Kind::ChebyshevCenter: {
      const ChebyshevResult cheb = chebyshev(k_gamma);
      if (!cheb.feasible) throw EmptyFeasibleSet("policy: eroded feasible set is empty");
      return cheb.center;
    }

    case Policy::Kind::LPVertex: {
      if (policy.cost.size() != sys.m)
        throw DimensionMismatch("policy: vertex cost dimension differs");
      return vertex_toward(k_gamma, policy.cost);
    }

    case Policy::Kind::RotatingVertex: {
      const auto k = static_cast<std::size_t>((step_index / policy.period) %
                                              static_cast<std::int64_t>(policy.costs.size()));
      if (policy.costs[k].size() != sys.m)
        throw DimensionMismatch("policy: vertex cost dimension differs");
      return vertex_toward(k_gamma, policy.costs[k]);
    }

    case Policy::Kind::QPTracking: {
      Eigen::VectorXd target;
      if (policy.feedback.size() > 0) {
        if (policy.feedback.rows() != sys.m || policy.feedback.cols() != sys.n)
          throw DimensionMismatch("policy: feedback gain dimensions disagree");
        target = -policy.feedback * x;
      } else if (policy.u_nom.size() > 0) {
        if (policy.u_nom.size() != sys.m)
          throw DimensionMismatch("policy: nominal control dimension differs");
        target = policy.u_nom;
      } else {
        target = Eigen::VectorXd::Zero(sys.m);
      }
      Eigen::VectorXd w = policy.weights;
      if (w.size() == 0) w = Eigen::VectorXd::Ones(sys.m);
      if (w.size() != sys.m) throw DimensionMismatch("policy: weight dimension differs");
      if ((w.array() <= 0).any()) throw InvalidParameter("policy: weights must be positive");

      QuadraticProgram qp;
      qp.Q = Eigen::MatrixXd(w.asDiagonal());
      qp.c = -(w.asDiagonal() * target);
      qp.constraints = k_gamma;
      const SolveOutcome sol = solve_qp(qp);
      if (sol.status != SolveStatus::Optimal)
        throw EmptyFeasibleSet("policy: eroded feasible set is empty");
      return sol.point;
    }

    case Policy::Kind::SafetyProgram: {
      const SafetyProgramResult res = solve_safety_program(spec, sys, x, policy.objective);
      if (res.status != SolveStatus::Optimal)
        throw EmptyFeasibleSet("policy: safety program is infeasible");
      if (contains(k_gamma, res.v, 1e-9)) return res.v;
      // synthesized gain admitted a control outside the eroded set; fall back
      const ChebyshevResult cheb = chebyshev(k_gamma);
      if (!cheb.feasible) throw EmptyFeasibleSet("policy: eroded feasible set is empty");
      if (events) events->push_back({step_index, "safety_program_fallback"});
      return cheb.center;
    }
  }
  throw InvalidParameter("policy: unknown kind");
}

}  // namespace polysafe
