#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <vector>

#include "polysafe/barrier.hpp"
#include "polysafe/geometry.hpp"

namespace polysafe {

// barriers + comparison functions + compact input polytope; validated on construction
struct SafetySpec {
  std::vector<Barrier> barriers;
  std::vector<AlphaFunction> alphas;
  Polytope input_set;

  SafetySpec(std::vector<Barrier> barriers_, std::vector<AlphaFunction> alphas_,
             Polytope input_set_);

  int num_barriers() const { return static_cast<int>(barriers.size()); }
  int state_dim() const { return barriers.front().dim(); }
  int input_dim() const { return input_set.dim(); }

  Eigen::VectorXd barrier_values(const Eigen::VectorXd& x) const;
};

// per-state feasible control set
//   K(x) = { u : L_g h_i(x) u <= -alpha_i(h_i(x)) - L_f h_i(x), u in input_set }
// barrier rows first (spec order), then the input rows
struct FeasibleMapResult {
  Polytope K;
  ChebyshevResult cheb;
  bool in_omega = false;  // interior nonempty, i.e. cheb feasible with radius > 0
};
FeasibleMapResult build_K(const SafetySpec& spec, const SystemDynamics& sys,
                          const Eigen::VectorXd& x);

// gamma-eroded feasible set K_gamma(x)
Polytope build_K_gamma(const SafetySpec& spec, const SystemDynamics& sys,
                       const Eigen::VectorXd& x, double gamma);

// index-addressed state sampler; must be safe to call concurrently
using DomainSampler = std::function<Eigen::VectorXd(std::uint64_t)>;

// gamma_hat = rho * min over `count` sampled states of the Chebyshev radius of K(x).
// Every sampled state must lie in the feasible-map domain (SampleOutsideOmega otherwise).
double estimate_gamma(const SafetySpec& spec, const SystemDynamics& sys,
                      const DomainSampler& sampler, double rho, int count,
                      bool parallel = true);

// sampled local Lipschitz constant of x -> K_gamma(x) around x
struct LipschitzEstimate {
  double value = 0.0;
  int pairs_used = 0;
  int pairs_skipped = 0;
};
LipschitzEstimate lipschitz_estimate(const SafetySpec& spec, const SystemDynamics& sys,
                                     const Eigen::VectorXd& x, double radius, int n_pairs,
                                     double gamma, std::uint64_t seed);

}  // namespace polysafe
