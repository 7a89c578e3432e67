#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace polysafe {

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct EmptyPolytope : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnboundedRadius : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnboundedDirection : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsupportedBarrierKind : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PreconditionViolated : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyFeasibleSet : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateGradient : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// thrown when a sampled state falls outside the feasible-map domain; carries the state
struct SampleOutsideOmega : std::runtime_error {
  Eigen::VectorXd state;
  SampleOutsideOmega(const std::string& msg, Eigen::VectorXd x)
      : std::runtime_error(msg), state(std::move(x)) {}
};

}  // namespace polysafe
