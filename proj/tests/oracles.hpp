#pragma once

// brute-force reference implementations used only by tests; deliberately
// independent of the solver and geometry code under test
#include <Eigen/Dense>
#include <vector>

#include "polysafe/geometry.hpp"

namespace oracles {

struct GridCheb {
  double radius = 0.0;
  Eigen::VectorXd center;
};
// exhaustive max over an axis grid of the min scaled facet slack
GridCheb grid_chebyshev(const polysafe::Polytope& P, const Eigen::VectorXd& lo,
                        const Eigen::VectorXd& hi, int per_axis);

double triangle_inradius(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                         const Eigen::Vector2d& c);

// all basic solutions of row n-subsets that satisfy the remaining rows;
// complete for bounded polytopes
std::vector<Eigen::VectorXd> enumerate_vertices(const polysafe::Polytope& P, double tol = 1e-9);

struct LpOracle {
  bool feasible = false;
  double objective = 0.0;
  Eigen::VectorXd point;
  double uniqueness_gap = 0.0;  // best vs second-best distinct vertex
  bool decisive = true;         // false when a candidate sits in the tolerance gray zone
};
LpOracle lp_by_vertices(const Eigen::VectorXd& c, const polysafe::Polytope& P);

struct QpOracle {
  bool feasible = false;
  double objective = 0.0;
  Eigen::VectorXd point;
  bool decisive = true;
};
// KKT enumeration over all active subsets of size <= dim; Q must be positive definite
QpOracle qp_by_active_subsets(const Eigen::MatrixXd& Q, const Eigen::VectorXd& c,
                              const polysafe::Polytope& P);

struct Interval {
  bool empty = true;
  double lo = 0.0;
  double hi = 0.0;
};
Interval interval_of(const polysafe::Polytope& P);

// exhaustive min of 0.5 z'Qz + c'z over grid points inside P
double grid_qp_min(const Eigen::MatrixXd& Q, const Eigen::VectorXd& c,
                   const polysafe::Polytope& P, const Eigen::VectorXd& lo,
                   const Eigen::VectorXd& hi, int per_axis);

}  // namespace oracles
