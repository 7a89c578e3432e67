#pragma once

#include <Eigen/Core>

#include "polysafe/geometry.hpp"

namespace polysafe {

enum class SolveStatus { Optimal, Infeasible, Unbounded, IterationLimit };

const char* to_string(SolveStatus s);

struct SolveOutcome {
  SolveStatus status = SolveStatus::Infeasible;
  Eigen::VectorXd point;
  double objective = 0.0;
  double kkt_residual = 0.0;
  bool ridge_applied = false;
};

// min c'x  s.t.  A x <= b, x free
struct LinearProgram {
  Eigen::VectorXd c;
  Polytope constraints;
};

// min 0.5 x'Qx + c'x  s.t.  A x <= b, Q symmetric positive definite
// (semidefinite Q within -1e-8 of PD gets a 1e-9 ridge, recorded in the outcome)
struct QuadraticProgram {
  Eigen::MatrixXd Q;
  Eigen::VectorXd c;
  Polytope constraints;
};

// dense two-phase simplex, Bland's rule, deterministic tie-breaking
SolveOutcome solve_lp(const LinearProgram& lp);

// primal active-set method started from a phase-1 feasible point
SolveOutcome solve_qp(const QuadraticProgram& qp);

}  // namespace polysafe
