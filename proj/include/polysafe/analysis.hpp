#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "polysafe/feasible_map.hpp"

namespace polysafe {

// indices on at least two boundaries simultaneously: i is active iff
// |h_i(x)| <= tol and some j != i also has |h_j(x)| <= tol
struct ActiveIndexSet {
  std::vector<int> indices;
  double tol = 0.0;
};
ActiveIndexSet active_set(const SafetySpec& spec, const Eigen::VectorXd& x, double tol);

// anti-parallel boundary normals are the only failure mode; parallel
// (same-direction) normals are benign
struct TransversalityReport {
  Eigen::VectorXd point;
  int i = 0;
  int j = 0;
  double cos_angle = 0.0;
  bool pass = false;
  bool degenerate = false;
};
TransversalityReport pairwise_transversality(const SafetySpec& spec, const Eigen::VectorXd& x,
                                             int i, int j, double angle_tol = 1e-6);

// Gauss-Newton solves of (h_i, h_j) = 0 from seeded starts in the joint
// bounding box; converged points deduplicated at distance 1e-6
std::vector<Eigen::VectorXd> boundary_intersection_sample(const SafetySpec& spec, int i, int j,
                                                          int count, std::uint64_t seed);

// axis-aligned box containing the joint safe set (intersection of the
// quadratic barriers' boxes; requires at least one quadratic barrier)
void safe_set_bounding_box(const SafetySpec& spec, Eigen::VectorXd& lo, Eigen::VectorXd& hi);

// rejection sampler over { x : h_i(x) < 0 for all i }, optionally also
// requiring membership in the feasible-map domain; index-addressed and
// deterministic per (seed, index)
DomainSampler make_interior_sampler(const SafetySpec& spec, const SystemDynamics& sys,
                                    std::uint64_t seed, bool require_omega);

struct CertificationReport {
  std::vector<double> strict_cbf;  // per-barrier worst boundary margin
  std::vector<TransversalityReport> transversality;
  int sweep_passed = 0;
  int sweep_total = 0;
  bool certified = false;
  double margin_floor = 1e-9;
  // diagnostic when three or more barriers meet: smallest singular value of
  // the stacked active gradients (no pass/fail threshold attached)
  std::vector<double> gradient_sigma_min;
};

CertificationReport certify(const SafetySpec& spec, const SystemDynamics& sys,
                            int boundary_samples, int sweep_samples, std::uint64_t seed,
                            bool parallel = true);

void write_certification_report(const CertificationReport& rep, const SafetySpec& spec,
                                std::ostream& out);

// samples n_controls members of K_gamma(x) and checks the flow condition
// <grad h_i(x), f + g u> <= 1e-8 for every barrier with |h_i(x)| <= 1e-8
bool cone_intersection_oracle(const SafetySpec& spec, const SystemDynamics& sys,
                              const Eigen::VectorXd& x, double gamma, int n_controls,
                              std::uint64_t seed);

}  // namespace polysafe
