#pragma once

#include <Eigen/Core>
#include <cstdint>

namespace polysafe {

// closed convex polytope in H-representation, { u : A u <= b }
struct Polytope {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;

  Polytope() = default;
  Polytope(Eigen::MatrixXd A_, Eigen::VectorXd b_);

  int dim() const { return static_cast<int>(A.cols()); }
  int rows() const { return static_cast<int>(A.rows()); }
};

// rows of p stacked above rows of q (same ambient dimension)
Polytope stack(const Polytope& p, const Polytope& q);

// { u : |u_i| <= u_max }, rows interleaved as (e_i, -e_i) per coordinate
Polytope box_input_polytope(int m, double u_max);

bool contains(const Polytope& p, const Eigen::VectorXd& u, double tol = 0.0);

// largest inscribed ball. radius 0 means nonempty with empty interior;
// feasible=false means the polytope is empty (center is then undefined).
struct ChebyshevResult {
  bool feasible = false;
  Eigen::VectorXd center;
  double radius = 0.0;
};
ChebyshevResult chebyshev(const Polytope& p);

// shift every facet inward by gamma: b_i -> b_i - gamma * ||A_i||_2
Polytope erode(const Polytope& p, double gamma);

struct Projection {
  double distance = 0.0;
  Eigen::VectorXd point;
};
Projection project_point(const Polytope& p, const Eigen::VectorXd& y);

// maximizer of <d, u> over p, returned as an LP-basic point
Eigen::VectorXd support_point(const Polytope& p, const Eigen::VectorXd& d);

// sampled one-sided Hausdorff gap sup_{u in p1} d(u, p2): support points of p1
// along n_dirs seeded random directions, projected onto p2
double directed_gap(const Polytope& p1, const Polytope& p2, int n_dirs, std::uint64_t seed);

}  // namespace polysafe
