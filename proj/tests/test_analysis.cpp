#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "polysafe/analysis.hpp"
#include "polysafe/errors.hpp"

using namespace polysafe;

namespace {

Polytope box_input(int m, double u_max) {
  Polytope U;
  U.A.resize(2 * m, m);
  U.b.resize(2 * m);
  U.A.topRows(m) = Eigen::MatrixXd::Identity(m, m);
  U.A.bottomRows(m) = -Eigen::MatrixXd::Identity(m, m);
  U.b.setConstant(u_max);
  return U;
}

Barrier disk(double cx, double cy) {
  Eigen::VectorXd c(2);
  c << cx, cy;
  return Barrier::quadratic(c, Eigen::MatrixXd::Identity(2, 2), 1.0);
}

SafetySpec two_disk_spec() {
  return SafetySpec({disk(-0.5, 0.0), disk(0.5, 0.0)},
                    {AlphaFunction::linear(1.0), AlphaFunction::linear(1.0)}, box_input(2, 1.0));
}

// externally tangent pair touching at (1, 0)
SafetySpec tangent_spec() {
  return SafetySpec({disk(0.0, 0.0), disk(2.0, 0.0)},
                    {AlphaFunction::linear(1.0), AlphaFunction::linear(1.0)}, box_input(2, 1.0));
}

// three unit disks whose boundaries all pass through the origin
SafetySpec three_disk_spec() {
  std::vector<Barrier> bs;
  std::vector<AlphaFunction> as;
  for (int k = 0; k < 3; ++k) {
    const double th = 2.0 * M_PI * k / 3.0;
    bs.push_back(disk(std::cos(th), std::sin(th)));
    as.push_back(AlphaFunction::linear(1.0));
  }
  return SafetySpec(bs, as, box_input(2, 1.0));
}

SafetySpec one_dim_spec() {
  Barrier h = Barrier::quadratic(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1), 1.0);
  return SafetySpec({h}, {AlphaFunction::linear(1.0)}, box_input(1, 1.0));
}

SystemDynamics drift_sys() {
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(1, 1);
  Eigen::MatrixXd G0 = Eigen::MatrixXd::Identity(1, 1);
  Eigen::VectorXd d(1);
  d << 3.0;
  return SystemDynamics::linear(F, G0, d);
}

}  // namespace

TEST_CASE("active set needs at least two coincident boundaries") {
  const SafetySpec spec = two_disk_spec();
  const double top = std::sqrt(0.75);

  Eigen::VectorXd vertex(2), inside(2), one_only(2);
  vertex << 0.0, top;
  inside << 0.0, 0.0;
  one_only << -1.5, 0.0;

  CHECK(active_set(spec, vertex, 1e-9).indices == std::vector<int>{0, 1});
  CHECK(active_set(spec, inside, 1e-9).indices.empty());
  CHECK(active_set(spec, one_only, 1e-9).indices.empty());
}

TEST_CASE("transversality separates crossing, tangent and degenerate contacts") {
  const double top = std::sqrt(0.75);

  SUBCASE("the lens vertex crosses at sixty degrees") {
    Eigen::VectorXd x(2);
    x << 0.0, top;
    const TransversalityReport rep = pairwise_transversality(two_disk_spec(), x, 0, 1);
    CHECK(rep.cos_angle == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rep.pass);
    CHECK(!rep.degenerate);
  }

  SUBCASE("externally tangent disks are anti-parallel") {
    Eigen::VectorXd x(2);
    x << 1.0, 0.0;
    const TransversalityReport rep = pairwise_transversality(tangent_spec(), x, 0, 1);
    CHECK(rep.cos_angle == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(!rep.pass);
  }

  SUBCASE("a vanishing gradient raises instead of guessing an angle") {
    Eigen::VectorXd x(2);
    x << -0.5, 0.0;  // center of the first disk
    CHECK_THROWS_AS(pairwise_transversality(two_disk_spec(), x, 0, 1), DegenerateGradient);
  }
}

TEST_CASE("intersection sampling recovers the meeting points of boundary pairs") {
  const double top = std::sqrt(0.75);

  SUBCASE("both lens vertices are found") {
    const auto pts = boundary_intersection_sample(two_disk_spec(), 0, 1, 40, 11);
    REQUIRE(pts.size() >= 2);
    bool found_top = false, found_bottom = false;
    for (const auto& p : pts) {
      CHECK(std::abs(p[0]) < 1e-7);
      CHECK(std::abs(std::abs(p[1]) - top) < 1e-7);
      if (p[1] > 0) found_top = true;
      if (p[1] < 0) found_bottom = true;
    }
    CHECK(found_top);
    CHECK(found_bottom);
  }

  SUBCASE("a tangency collapses to the touching point") {
    const auto pts = boundary_intersection_sample(tangent_spec(), 0, 1, 40, 11);
    REQUIRE(!pts.empty());
    for (const auto& p : pts) {
      // the root is degenerate, so the off-axis error scales with the square
      // root of the residual tolerance
      CHECK(std::abs(p[0] - 1.0) < 1e-6);
      CHECK(std::abs(p[1]) < 2e-5);
    }
  }

  SUBCASE("disjoint bounding boxes yield nothing") {
    const SafetySpec far_apart =
        SafetySpec({disk(0.0, 0.0), disk(10.0, 0.0)},
                   {AlphaFunction::linear(1.0), AlphaFunction::linear(1.0)}, box_input(2, 1.0));
    CHECK(boundary_intersection_sample(far_apart, 0, 1, 40, 11).empty());
  }
}

TEST_CASE("joint bounding box intersects the per-barrier boxes") {
  Eigen::VectorXd lo, hi;
  safe_set_bounding_box(two_disk_spec(), lo, hi);
  CHECK(lo[0] == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(hi[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(lo[1] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(hi[1] == doctest::Approx(1.0).epsilon(1e-12));

  const SafetySpec far_apart =
      SafetySpec({disk(0.0, 0.0), disk(10.0, 0.0)},
                 {AlphaFunction::linear(1.0), AlphaFunction::linear(1.0)}, box_input(2, 1.0));
  CHECK_THROWS_AS(safe_set_bounding_box(far_apart, lo, hi), InvalidParameter);
}

TEST_CASE("interior sampler is index-addressed and honors the domain") {
  const SafetySpec spec = one_dim_spec();

  SUBCASE("same seed and index reproduce the draw") {
    const DomainSampler a = make_interior_sampler(spec, drift_sys(), 17, false);
    const DomainSampler b = make_interior_sampler(spec, drift_sys(), 17, false);
    CHECK(a(3) == b(3));
    CHECK(a(3) != a(4));
  }

  SUBCASE("rejection respects barrier sign and, on request, the feasible domain") {
    const DomainSampler loose = make_interior_sampler(spec, drift_sys(), 17, false);
    const DomainSampler tight = make_interior_sampler(spec, drift_sys(), 17, true);
    // with d = 3 the feasible domain is roughly x < sqrt(5) - 2
    double loose_max = -1.0;
    for (int k = 0; k < 50; ++k) {
      const Eigen::VectorXd xl = loose(k);
      const Eigen::VectorXd xt = tight(k);
      CHECK(spec.barriers[0].value(xl) < 0);
      CHECK(spec.barriers[0].value(xt) < 0);
      CHECK(build_K(spec, drift_sys(), xt).in_omega);
      loose_max = std::max(loose_max, xl[0]);
      CHECK(xt[0] <= std::sqrt(5.0) - 2.0 + 1e-9);
    }
    CHECK(loose_max > std::sqrt(5.0) - 2.0);  // the loose sampler does reach that region
  }

  SUBCASE("an empty interior is reported") {
    const DomainSampler s = make_interior_sampler(tangent_spec(),
                                                  SystemDynamics::single_integrator(2), 17, false);
    CHECK_THROWS_AS(s(0), InvalidParameter);
  }
}

TEST_CASE("certification accepts the crossing pair and rejects the bad cases") {
  SUBCASE("two disks certify") {
    const SafetySpec spec = two_disk_spec();
    const CertificationReport rep =
        certify(spec, SystemDynamics::single_integrator(2), 50, 100, 5);
    CHECK(rep.certified);
    REQUIRE(rep.strict_cbf.size() == 2);
    for (double m : rep.strict_cbf) {
      CHECK(m <= -2.0 + 1e-9);  // single integrator: worst boundary margin is -|grad|_1
      CHECK(m >= -2.0 * std::sqrt(2.0) - 1e-9);
    }
    REQUIRE(rep.transversality.size() == 2);  // one entry per lens vertex
    for (const auto& tr : rep.transversality) {
      CHECK(tr.pass);
      CHECK(tr.cos_angle == doctest::Approx(0.5).epsilon(1e-6));
    }
    CHECK(rep.sweep_passed == rep.sweep_total);
    CHECK(rep.sweep_total == 100);
  }

  SUBCASE("tangency fails certification") {
    const CertificationReport rep =
        certify(tangent_spec(), SystemDynamics::single_integrator(2), 50, 100, 5);
    CHECK(!rep.certified);
    REQUIRE(!rep.transversality.empty());
    for (const auto& tr : rep.transversality) {
      CHECK(!tr.pass);
      CHECK(tr.cos_angle == doctest::Approx(-1.0).epsilon(1e-6));
    }
  }

  SUBCASE("drift stronger than the input authority fails the margin test") {
    const CertificationReport rep = certify(one_dim_spec(), drift_sys(), 50, 100, 5);
    CHECK(!rep.certified);
    REQUIRE(rep.strict_cbf.size() == 1);
    CHECK(rep.strict_cbf[0] == doctest::Approx(4.0).epsilon(1e-9));
  }

  SUBCASE("triple contact populates the gradient diagnostic") {
    const CertificationReport rep =
        certify(three_disk_spec(), SystemDynamics::single_integrator(2), 20, 20, 5);
    REQUIRE(!rep.gradient_sigma_min.empty());
    for (double s : rep.gradient_sigma_min)
      CHECK(s == doctest::Approx(std::sqrt(6.0)).epsilon(1e-6));
  }
}

TEST_CASE("certification report text is stable and labeled") {
  const SafetySpec spec = two_disk_spec();
  const SystemDynamics sys = SystemDynamics::single_integrator(2);
  const CertificationReport rep = certify(spec, sys, 50, 100, 5);

  std::ostringstream a, b;
  write_certification_report(rep, spec, a);
  write_certification_report(rep, spec, b);
  CHECK(a.str() == b.str());
  CHECK(a.str().find("certified: yes") != std::string::npos);
  CHECK(a.str().find("strict_cbf: barrier=0") != std::string::npos);
  CHECK(a.str().find("transversality: pair=(0,1)") != std::string::npos);
  CHECK(a.str().find("feasibility_sweep: 100/100 ok") != std::string::npos);

  const CertificationReport bad = certify(tangent_spec(), sys, 20, 20, 5);
  std::ostringstream c;
  write_certification_report(bad, tangent_spec(), c);
  CHECK(c.str().find("certified: no") != std::string::npos);
  CHECK(c.str().find("FAIL") != std::string::npos);
}

TEST_CASE("sampled flow checks confirm controls point along the boundary or inward") {
  const SafetySpec spec = two_disk_spec();
  const SystemDynamics sys = SystemDynamics::single_integrator(2);
  Eigen::VectorXd x(2);
  x << -0.5, 0.0;  // on the second disk's boundary, deep inside the first

  CHECK(cone_intersection_oracle(spec, sys, x, 0.2, 25, 9));
  CHECK_THROWS_AS(cone_intersection_oracle(spec, sys, x, 2.0, 25, 9), EmptyFeasibleSet);
}
