#include "polysafe/feasible_map.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "polysafe/errors.hpp"
#include "polysafe/rng.hpp"
#include "polysafe/solver.hpp"

namespace polysafe {

SafetySpec::SafetySpec(std::vector<Barrier> barriers_, std::vector<AlphaFunction> alphas_,
                       Polytope input_set_)
    : barriers(std::move(barriers_)), alphas(std::move(alphas_)), input_set(std::move(input_set_)) {
  if (barriers.empty()) throw InvalidParameter("spec: need at least one barrier");
  if (alphas.size() != barriers.size())
    throw DimensionMismatch("spec: one comparison function per barrier required");
  for (const auto& b : barriers)
    if (b.dim() != barriers.front().dim())
      throw DimensionMismatch("spec: barrier state dimensions differ");

  // probe compactness first; chebyshev on an unbounded set has no answer
  for (int j = 0; j < input_set.dim(); ++j) {
    Eigen::VectorXd dir = Eigen::VectorXd::Zero(input_set.dim());
    for (const double s : {1.0, -1.0}) {
      dir[j] = s;
      try {
        support_point(input_set, dir);
      } catch (const UnboundedDirection&) {
        throw InvalidParameter("spec: input polytope must be compact");
      }
    }
  }
  const ChebyshevResult cheb = chebyshev(input_set);
  if (!cheb.feasible || !(cheb.radius > 0))
    throw InvalidParameter("spec: input polytope must have nonempty interior");
}

Eigen::VectorXd SafetySpec::barrier_values(const Eigen::VectorXd& x) const {
  Eigen::VectorXd h(num_barriers());
  for (int i = 0; i < num_barriers(); ++i) h[i] = barriers[i].value(x);
  return h;
}

FeasibleMapResult build_K(const SafetySpec& spec, const SystemDynamics& sys,
                          const Eigen::VectorXd& x) {
  if (sys.n != spec.state_dim() || sys.m != spec.input_dim())
    throw DimensionMismatch("build_K: system and spec dimensions disagree");
  if (x.size() != sys.n) throw DimensionMismatch("build_K: state dimension differs");

  const int N = spec.num_barriers();
  Polytope rows;
  rows.A.resize(N, sys.m);
  rows.b.resize(N);
  for (int i = 0; i < N; ++i) {
    const LieDerivatives ld = lie_derivatives(sys, spec.barriers[i], x);
    rows.A.row(i) = ld.Lg;
    rows.b[i] = -spec.alphas[i](spec.barriers[i].value(x)) - ld.Lf;
  }

  FeasibleMapResult out;
  out.K = stack(rows, spec.input_set);
  out.cheb = chebyshev(out.K);
  out.in_omega = out.cheb.feasible && out.cheb.radius > 0;
  return out;
}

Polytope build_K_gamma(const SafetySpec& spec, const SystemDynamics& sys,
                       const Eigen::VectorXd& x, double gamma) {
  if (gamma < 0) throw InvalidParameter("build_K_gamma: gamma must be nonnegative");
  return erode(build_K(spec, sys, x).K, gamma);
}

double estimate_gamma(const SafetySpec& spec, const SystemDynamics& sys,
                      const DomainSampler& sampler, double rho, int count, bool parallel) {
  if (!(rho > 0) || !(rho < 1)) throw InvalidParameter("estimate_gamma: rho must lie in (0, 1)");
  if (count < 1) throw InvalidParameter("estimate_gamma: need at least one sample");

  std::vector<double> radii(count, 0.0);
  std::vector<char> outside(count, 0);
  std::vector<Eigen::VectorXd> states(count);

  auto eval = [&](int i) {
    const Eigen::VectorXd x = sampler(static_cast<std::uint64_t>(i));
    const FeasibleMapResult r = build_K(spec, sys, x);
    if (!r.in_omega) {
      outside[i] = 1;
      states[i] = x;
    } else {
      radii[i] = r.cheb.radius;
    }
  };

  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < count; ++i) eval(i);
  } else {
    for (int i = 0; i < count; ++i) eval(i);
  }

  for (int i = 0; i < count; ++i) {
    if (outside[i])
      throw SampleOutsideOmega("estimate_gamma: sampled state has empty feasible-set interior",
                               states[i]);
  }
  return rho * *std::min_element(radii.begin(), radii.end());
}

LipschitzEstimate lipschitz_estimate(const SafetySpec& spec, const SystemDynamics& sys,
                                     const Eigen::VectorXd& x, double radius, int n_pairs,
                                     double gamma, std::uint64_t seed) {
  if (!(radius > 0)) throw InvalidParameter("lipschitz_estimate: radius must be positive");
  if (n_pairs < 1) throw InvalidParameter("lipschitz_estimate: need at least one pair");
  if (gamma < 0) throw InvalidParameter("lipschitz_estimate: gamma must be nonnegative");

  const double inv_n = 1.0 / static_cast<double>(x.size());
  LipschitzEstimate est;
  for (int j = 0; j < n_pairs; ++j) {
    Rng rng(split_seed(seed, j));
    auto draw = [&]() {
      return Eigen::VectorXd(x + radius * std::pow(rng.uniform01(), inv_n) *
                                      rng.unit_vector(static_cast<int>(x.size())));
    };
    const Eigen::VectorXd x1 = draw();
    const Eigen::VectorXd x2 = draw();

    const FeasibleMapResult r1 = build_K(spec, sys, x1);
    if (!r1.in_omega)
      throw SampleOutsideOmega("lipschitz_estimate: sampled state outside the domain", x1);
    const FeasibleMapResult r2 = build_K(spec, sys, x2);
    if (!r2.in_omega)
      throw SampleOutsideOmega("lipschitz_estimate: sampled state outside the domain", x2);

    const double dist = (x1 - x2).norm();
    if (dist < 1e-12) {
      ++est.pairs_skipped;
      continue;
    }
    const double gap =
        directed_gap(erode(r2.K, gamma), erode(r1.K, gamma), 64, split_seed(seed, 1000000 + j));
    est.value = std::max(est.value, gap / dist);
    ++est.pairs_used;
  }
  return est;
}

}  // namespace polysafe
