#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "polysafe/safety_program.hpp"

namespace polysafe {

// measurable selections of K_gamma(x); discontinuous selections are expected
struct Policy {
  enum class Kind { ChebyshevCenter, QPTracking, LPVertex, RotatingVertex, SafetyProgram };
  Kind kind = Kind::ChebyshevCenter;

  // QPTracking: min 0.5 (u - u_nom(x))' W (u - u_nom(x)), u_nom constant or -feedback*x
  Eigen::VectorXd u_nom;
  Eigen::MatrixXd feedback;  // nonempty => u_nom(x) = -feedback * x
  Eigen::VectorXd weights;   // diagonal of W; empty => identity

  // LPVertex: basic minimizer of cost'u
  Eigen::VectorXd cost;

  // RotatingVertex: cost index (step / period) mod costs.size()
  std::vector<Eigen::VectorXd> costs;
  int period = 1;

  // SafetyProgram: applied v is post-checked against K_gamma(x)
  ObjectiveChoice objective;

  static Policy chebyshev_center();
  static Policy qp_tracking(Eigen::VectorXd u_nom, Eigen::VectorXd weights = {});
  static Policy qp_tracking_feedback(Eigen::MatrixXd feedback, Eigen::VectorXd weights = {});
  static Policy lp_vertex(Eigen::VectorXd cost);
  static Policy rotating_vertex(std::vector<Eigen::VectorXd> costs, int period);
  static Policy safety_program(ObjectiveChoice objective);
};

struct PolicyEvent {
  std::int64_t step = 0;
  std::string tag;
};

// throws EmptyFeasibleSet when K_gamma(x) has no point to select
Eigen::VectorXd select_control(const Policy& policy, const SafetySpec& spec,
                               const SystemDynamics& sys, const Eigen::VectorXd& x,
                               std::int64_t step_index, double gamma,
                               std::vector<PolicyEvent>* events = nullptr);

}  // namespace polysafe
