#include "polysafe/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <vector>

#include "polysafe/errors.hpp"
#include "polysafe/rng.hpp"
#include "polysafe/safety_program.hpp"

namespace polysafe {

ActiveIndexSet active_set(const SafetySpec& spec, const Eigen::VectorXd& x, double tol) {
  if (tol < 0) throw InvalidParameter("active_set: tol must be nonnegative");
  const Eigen::VectorXd h = spec.barrier_values(x);
  ActiveIndexSet out;
  out.tol = tol;
  int near = 0;
  for (int i = 0; i < h.size(); ++i)
    if (std::abs(h[i]) <= tol) ++near;
  if (near >= 2) {
    for (int i = 0; i < h.size(); ++i)
      if (std::abs(h[i]) <= tol) out.indices.push_back(i);
  }
  return out;
}

TransversalityReport pairwise_transversality(const SafetySpec& spec, const Eigen::VectorXd& x,
                                             int i, int j, double angle_tol) {
  if (i == j || i < 0 || j < 0 || i >= spec.num_barriers() || j >= spec.num_barriers())
    throw InvalidParameter("pairwise_transversality: bad barrier pair");
  if (!(angle_tol > 0)) throw InvalidParameter("pairwise_transversality: angle_tol must be positive");

  TransversalityReport rep;
  rep.point = x;
  rep.i = i;
  rep.j = j;

  const Eigen::VectorXd gi = spec.barriers[i].gradient(x);
  const Eigen::VectorXd gj = spec.barriers[j].gradient(x);
  if (gi.norm() < 1e-12 || gj.norm() < 1e-12)
    throw DegenerateGradient("pairwise_transversality: vanishing boundary normal");

  rep.cos_angle = gi.dot(gj) / (gi.norm() * gj.norm());
  rep.pass = rep.cos_angle > -1.0 + angle_tol;
  return rep;
}

std::vector<Eigen::VectorXd> boundary_intersection_sample(const SafetySpec& spec, int i, int j,
                                                          int count, std::uint64_t seed) {
  if (i == j || i < 0 || j < 0 || i >= spec.num_barriers() || j >= spec.num_barriers())
    throw InvalidParameter("boundary_intersection_sample: bad barrier pair");
  if (count < 1) throw InvalidParameter("boundary_intersection_sample: count must be positive");

  const int n = spec.state_dim();
  Eigen::VectorXd lo_i(n), hi_i(n), lo_j(n), hi_j(n);
  spec.barriers[i].bounding_box(lo_i, hi_i);
  spec.barriers[j].bounding_box(lo_j, hi_j);
  const Eigen::VectorXd lo = lo_i.cwiseMax(lo_j);
  const Eigen::VectorXd hi = hi_i.cwiseMin(hi_j);
  std::vector<Eigen::VectorXd> kept;
  if ((lo.array() > hi.array()).any()) return kept;  // boxes disjoint, boundaries cannot meet

  Rng rng(seed);
  for (int s = 0; s < count; ++s) {
    Eigen::VectorXd x = rng.in_box(lo, hi);
    bool converged = false;
    for (int it = 0; it < 60; ++it) {
      Eigen::Vector2d r(spec.barriers[i].value(x), spec.barriers[j].value(x));
      if (r.lpNorm<Eigen::Infinity>() <= 1e-10) {
        converged = true;
        break;
      }
      Eigen::MatrixXd J(2, n);
      J.row(0) = spec.barriers[i].gradient(x).transpose();
      J.row(1) = spec.barriers[j].gradient(x).transpose();
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
      svd.setThreshold(1e-10);
      const Eigen::VectorXd step = svd.solve(-r);
      if (!step.allFinite()) break;
      x += step;
      if (step.norm() > 1e6) break;
    }
    if (!converged) continue;
    bool dup = false;
    for (const auto& y : kept) {
      if ((x - y).norm() <= 1e-6) {
        dup = true;
        break;
      }
    }
    if (!dup) kept.push_back(x);
  }
  return kept;
}

void safe_set_bounding_box(const SafetySpec& spec, Eigen::VectorXd& lo, Eigen::VectorXd& hi) {
  const int n = spec.state_dim();
  bool found = false;
  for (const auto& b : spec.barriers) {
    if (b.kind() != Barrier::Kind::Quadratic) continue;
    Eigen::VectorXd l(n), h(n);
    b.bounding_box(l, h);
    if (!found) {
      lo = l;
      hi = h;
      found = true;
    } else {
      lo = lo.cwiseMax(l);
      hi = hi.cwiseMin(h);
    }
  }
  if (!found)
    throw InvalidParameter("safe_set_bounding_box: needs at least one quadratic barrier");
  if ((lo.array() > hi.array()).any())
    throw InvalidParameter("safe_set_bounding_box: barrier boxes do not intersect");
}

DomainSampler make_interior_sampler(const SafetySpec& spec, const SystemDynamics& sys,
                                    std::uint64_t seed, bool require_omega) {
  Eigen::VectorXd lo, hi;
  safe_set_bounding_box(spec, lo, hi);
  // captured by value so the sampler stays valid beyond its arguments' lifetimes
  return [spec, sys, seed, require_omega, lo, hi](std::uint64_t index) {
    Rng rng(split_seed(seed, index));
    for (int tries = 0; tries < 10000; ++tries) {
      Eigen::VectorXd x = rng.in_box(lo, hi);
      bool inside = true;
      for (const auto& b : spec.barriers) {
        if (!(b.value(x) < 0)) {
          inside = false;
          break;
        }
      }
      if (!inside) continue;
      if (require_omega && !build_K(spec, sys, x).in_omega) continue;
      return x;
    }
    throw InvalidParameter("interior sampler: acceptance rate below 1e-4");
  };
}

CertificationReport certify(const SafetySpec& spec, const SystemDynamics& sys,
                            int boundary_samples, int sweep_samples, std::uint64_t seed,
                            bool parallel) {
  if (boundary_samples < 1 || sweep_samples < 1)
    throw InvalidParameter("certify: sample counts must be positive");

  const int N = spec.num_barriers();
  CertificationReport rep;
  rep.strict_cbf.assign(N, 0.0);

  // worst strict-CBF margin over seeded boundary samples, per barrier
  for (int i = 0; i < N; ++i) {
    const std::vector<Eigen::VectorXd> pts =
        boundary_sample(spec.barriers[i], boundary_samples, split_seed(seed, 100 + i));
    std::vector<double> margins(pts.size(), 0.0);
    const int count = static_cast<int>(pts.size());
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
      for (int k = 0; k < count; ++k)
        margins[k] = strict_cbf_margin(sys, spec.barriers[i], spec.input_set, pts[k]);
    } else {
      for (int k = 0; k < count; ++k)
        margins[k] = strict_cbf_margin(sys, spec.barriers[i], spec.input_set, pts[k]);
    }
    rep.strict_cbf[i] = *std::max_element(margins.begin(), margins.end());
  }
  bool strict_ok = true;
  for (const double m : rep.strict_cbf) strict_ok = strict_ok && (m < -rep.margin_floor);

  // transversality at sampled boundary intersections of every pair
  bool trans_ok = true;
  for (int i = 0; i < N; ++i) {
    for (int j = i + 1; j < N; ++j) {
      const auto pts = boundary_intersection_sample(spec, i, j, boundary_samples,
                                                    split_seed(seed, 200 + 31 * i + j));
      for (const auto& x : pts) {
        TransversalityReport tr;
        try {
          tr = pairwise_transversality(spec, x, i, j);
        } catch (const DegenerateGradient&) {
          tr.point = x;
          tr.i = i;
          tr.j = j;
          tr.degenerate = true;
          tr.pass = false;
        }
        trans_ok = trans_ok && tr.pass;
        rep.transversality.push_back(std::move(tr));

        const ActiveIndexSet act = active_set(spec, x, 1e-8);
        if (static_cast<int>(act.indices.size()) >= 3) {
          Eigen::MatrixXd G(act.indices.size(), spec.state_dim());
          for (std::size_t r = 0; r < act.indices.size(); ++r)
            G.row(r) = spec.barriers[act.indices[r]].gradient(x).transpose();
          rep.gradient_sigma_min.push_back(
              Eigen::JacobiSVD<Eigen::MatrixXd>(G).singularValues().minCoeff());
        }
      }
    }
  }

  // joint feasibility sweep over the safe interior
  rep.sweep_total = sweep_samples;
  const DomainSampler sampler = make_interior_sampler(spec, sys, split_seed(seed, 300), false);
  std::vector<char> ok(sweep_samples, 0);
  auto sweep_one = [&](int s) {
    try {
      const Eigen::VectorXd x = sampler(static_cast<std::uint64_t>(s));
      if (!build_K(spec, sys, x).in_omega) return;
      const SafetyProgramResult r =
          solve_safety_program(spec, sys, x, ObjectiveChoice::feasibility());
      if (r.status == SolveStatus::Optimal && r.lifted_radius > 0) ok[s] = 1;
    } catch (const std::exception&) {
      // unsampleable interior or solver failure counts against the sweep
    }
  };
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int s = 0; s < sweep_samples; ++s) sweep_one(s);
  } else {
    for (int s = 0; s < sweep_samples; ++s) sweep_one(s);
  }
  rep.sweep_passed = static_cast<int>(std::count(ok.begin(), ok.end(), char(1)));

  rep.certified = strict_ok && trans_ok && rep.sweep_passed == rep.sweep_total;
  return rep;
}

void write_certification_report(const CertificationReport& rep, const SafetySpec& spec,
                                std::ostream& out) {
  char buf[40];
  out << "certified: " << (rep.certified ? "yes" : "no") << '\n';
  std::snprintf(buf, sizeof buf, "%.17g", rep.margin_floor);
  out << "margin_floor: " << buf << '\n';
  for (std::size_t i = 0; i < rep.strict_cbf.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", rep.strict_cbf[i]);
    out << "strict_cbf: barrier=" << i << " worst_margin=" << buf
        << (rep.strict_cbf[i] < -rep.margin_floor ? " ok" : " FAIL") << '\n';
  }
  for (const auto& t : rep.transversality) {
    std::snprintf(buf, sizeof buf, "%.17g", t.cos_angle);
    out << "transversality: pair=(" << t.i << "," << t.j << ") cos_angle=" << buf << ' '
        << (t.degenerate ? "DEGENERATE" : (t.pass ? "ok" : "FAIL")) << " point=";
    for (int c = 0; c < t.point.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.6g", t.point[c]);
      out << (c ? "," : "") << buf;
    }
    out << '\n';
  }
  out << "feasibility_sweep: " << rep.sweep_passed << '/' << rep.sweep_total
      << (rep.sweep_passed == rep.sweep_total ? " ok" : " FAIL") << '\n';
  for (const double s : rep.gradient_sigma_min) {
    std::snprintf(buf, sizeof buf, "%.17g", s);
    out << "active_gradient_sigma_min: " << buf << '\n';
  }
  (void)spec;
}

bool cone_intersection_oracle(const SafetySpec& spec, const SystemDynamics& sys,
                              const Eigen::VectorXd& x, double gamma, int n_controls,
                              std::uint64_t seed) {
  if (n_controls < 1) throw InvalidParameter("cone_intersection_oracle: need controls to sample");
  const Polytope kg = build_K_gamma(spec, sys, x, gamma);
  const ChebyshevResult cheb = chebyshev(kg);
  if (!cheb.feasible) throw EmptyFeasibleSet("cone_intersection_oracle: eroded set is empty");

  std::vector<int> active;
  for (int i = 0; i < spec.num_barriers(); ++i)
    if (std::abs(spec.barriers[i].value(x)) <= 1e-8) active.push_back(i);

  Rng rng(split_seed(seed, 0));
  auto admissible = [&](const Eigen::VectorXd& u) {
    const Eigen::VectorXd xdot = sys.flow(x, u);
    for (const int i : active)
      if (spec.barriers[i].gradient(x).dot(xdot) > 1e-8) return false;
    return true;
  };

  if (!admissible(cheb.center)) return false;
  for (int k = 0; k < n_controls; ++k) {
    const Eigen::VectorXd v = support_point(kg, rng.unit_vector(kg.dim()));
    if (!admissible(v)) return false;
    if (!admissible(0.5 * (v + cheb.center))) return false;
  }
  return true;
}

}  // namespace polysafe
