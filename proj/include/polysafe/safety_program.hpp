#pragma once

#include <Eigen/Core>

#include "polysafe/feasible_map.hpp"
#include "polysafe/solver.hpp"

namespace polysafe {

// control selection program over z = (v, delta_1..delta_N):
//   A_u v <= b_u
//   L_f h_i(x) + L_g h_i(x) v + delta_i h_i(x) <= 0
//   0 <= delta_i <= 1e6
// The synthesized delta_i play the role of per-barrier class-K gains.
struct ObjectiveChoice {
  enum class Kind { Feasibility, LinearCost, Tracking };
  Kind kind = Kind::Feasibility;
  Eigen::VectorXd linear_cost;  // over (v, delta)
  Eigen::VectorXd u_nom;        // tracking target for v
  Eigen::VectorXd weights;      // tracking weights on delta

  static ObjectiveChoice feasibility();
  static ObjectiveChoice linear_cost_of(Eigen::VectorXd c);
  static ObjectiveChoice tracking(Eigen::VectorXd u_nom, Eigen::VectorXd weights);
};

struct SafetyProgramResult {
  SolveStatus status = SolveStatus::Infeasible;
  Eigen::VectorXd v;
  Eigen::VectorXd delta;
  double objective = 0.0;
  double lifted_radius = 0.0;  // Chebyshev radius of the lifted polytope (Feasibility only)
};

inline constexpr double kDeltaCap = 1e6;

Polytope lifted_polytope(const SafetySpec& spec, const SystemDynamics& sys,
                         const Eigen::VectorXd& x);

SafetyProgramResult solve_safety_program(const SafetySpec& spec, const SystemDynamics& sys,
                                         const Eigen::VectorXd& x,
                                         const ObjectiveChoice& objective);

}  // namespace polysafe
