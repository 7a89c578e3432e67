#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "polysafe/barrier.hpp"
#include "polysafe/errors.hpp"
#include "polysafe/rng.hpp"

using namespace polysafe;

TEST_CASE("quadratic barrier value, gradient, and construction checks") {
  Eigen::MatrixXd P(2, 2);
  P << 2, 0.5, 0.5, 1;
  const Barrier h = Barrier::quadratic(Eigen::Vector2d(1.0, -1.0), P, 2.0);
  const Eigen::Vector2d x(2.0, 0.0);
  const Eigen::Vector2d dx = x - Eigen::Vector2d(1.0, -1.0);
  CHECK(h.value(x) == doctest::Approx(dx.dot(P * dx) - 2.0).epsilon(1e-14));
  CHECK(h.gradient(x).isApprox(2.0 * P * dx, 1e-14));

  Eigen::MatrixXd bad = P;
  bad(0, 1) = 0.9;  // asymmetric
  CHECK_THROWS_AS(Barrier::quadratic(Eigen::Vector2d::Zero(), bad, 1.0), InvalidParameter);
  Eigen::MatrixXd indef(2, 2);
  indef << 1, 0, 0, -1;
  CHECK_THROWS_AS(Barrier::quadratic(Eigen::Vector2d::Zero(), indef, 1.0), InvalidParameter);
  CHECK_THROWS_AS(Barrier::quadratic(Eigen::Vector2d::Zero(), P, 0.0), InvalidParameter);
}

TEST_CASE("affine barrier requires acknowledging noncompactness") {
  CHECK_THROWS_AS(Barrier::affine(Eigen::Vector2d(1, 0), 1.0, false), InvalidParameter);
  CHECK_THROWS_AS(Barrier::affine(Eigen::Vector2d::Zero(), 1.0, true), InvalidParameter);
  const Barrier h = Barrier::affine(Eigen::Vector2d(1.0, 2.0), 0.5, true);
  CHECK(h.value(Eigen::Vector2d(1.0, 1.0)) == doctest::Approx(2.5));
  CHECK(h.gradient(Eigen::Vector2d::Zero()).isApprox(Eigen::Vector2d(1.0, 2.0)));
  CHECK(!h.compact());
  Eigen::VectorXd lo, hi;
  CHECK_THROWS_AS(h.bounding_box(lo, hi), UnsupportedBarrierKind);
}

TEST_CASE("bounding box covers axis extents of ellipses") {
  const Barrier disk =
      Barrier::quadratic(Eigen::Vector2d(0.3, -0.2), Eigen::MatrixXd::Identity(2, 2), 1.0);
  Eigen::VectorXd lo, hi;
  disk.bounding_box(lo, hi);
  CHECK(lo.isApprox(Eigen::Vector2d(-0.7, -1.2), 1e-12));
  CHECK(hi.isApprox(Eigen::Vector2d(1.3, 0.8), 1e-12));

  const Barrier ell =
      Barrier::quadratic(Eigen::Vector2d::Zero(), Eigen::Vector2d(4.0, 1.0).asDiagonal(), 1.0);
  ell.bounding_box(lo, hi);
  CHECK(hi.isApprox(Eigen::Vector2d(0.5, 1.0), 1e-12));
}

TEST_CASE("alpha functions evaluate and validate gains") {
  const AlphaFunction lin = AlphaFunction::linear(2.0);
  const AlphaFunction cub = AlphaFunction::cubic(0.5);
  CHECK(lin(-0.3) == doctest::Approx(-0.6));
  CHECK(cub(2.0) == doctest::Approx(4.0));
  CHECK(cub(-2.0) == doctest::Approx(-4.0));
  CHECK_THROWS_AS(AlphaFunction::linear(0.0), InvalidParameter);
  CHECK_THROWS_AS(AlphaFunction::cubic(-1.0), InvalidParameter);
}

TEST_CASE("dynamics catalog evaluates flows") {
  const SystemDynamics si = SystemDynamics::single_integrator(2);
  CHECK(si.flow(Eigen::Vector2d(5, 5), Eigen::Vector2d(1, -2)).isApprox(Eigen::Vector2d(1, -2)));

  Eigen::MatrixXd F(2, 2), G0(2, 1);
  F << 0, 1, -1, 0;
  G0 << 0, 1;
  const SystemDynamics lin = SystemDynamics::linear(F, G0, Eigen::Vector2d(0.1, 0.0));
  const Eigen::Vector2d x(1.0, 2.0);
  Eigen::VectorXd u(1);
  u << 3.0;
  CHECK(lin.flow(x, u).isApprox(F * x + Eigen::Vector2d(0.1, 0.0) + G0 * u, 1e-14));

  // quadratic drift f_i = x'Q_i x and state-dependent input map
  std::vector<Eigen::MatrixXd> quad{Eigen::MatrixXd::Identity(2, 2),
                                    Eigen::MatrixXd::Zero(2, 2)};
  std::vector<Eigen::MatrixXd> gs{(Eigen::MatrixXd(2, 1) << 1, 0).finished(),
                                  Eigen::MatrixXd::Zero(2, 1)};
  const SystemDynamics aq =
      SystemDynamics::affine_quadratic(2, 1, F, Eigen::Vector2d::Zero(), quad, G0, gs);
  const Eigen::VectorXd fx = aq.drift(x);
  CHECK(fx[0] == doctest::Approx((F * x)[0] + x.squaredNorm()).epsilon(1e-14));
  CHECK(fx[1] == doctest::Approx((F * x)[1]).epsilon(1e-14));
  CHECK(aq.input_map(x)(0, 0) == doctest::Approx(x[0]));  // G0(0,0)=0 plus x1*1

  CHECK_THROWS_AS(SystemDynamics::linear(F, Eigen::MatrixXd::Zero(3, 1)), DimensionMismatch);
  CHECK_THROWS_AS(
      SystemDynamics::affine_quadratic(2, 1, F, Eigen::Vector2d::Zero(),
                                       {Eigen::MatrixXd::Identity(2, 2)}, G0, {}),
      DimensionMismatch);
}

TEST_CASE("lie derivatives on the two-disk configuration") {
  const Barrier h =
      Barrier::quadratic(Eigen::Vector2d(-0.5, 0.0), Eigen::MatrixXd::Identity(2, 2), 1.0);
  const SystemDynamics sys = SystemDynamics::single_integrator(2);
  const Eigen::Vector2d x(0.5, 0.0);  // on the boundary
  CHECK(h.value(x) == doctest::Approx(0.0));
  const LieDerivatives ld = lie_derivatives(sys, h, x);
  CHECK(ld.Lf == doctest::Approx(0.0));
  CHECK(ld.Lg.transpose().isApprox(Eigen::Vector2d(2.0, 0.0), 1e-14));
}

TEST_CASE("finite differences confirm gradients") {
  Eigen::MatrixXd P(2, 2);
  P << 3, 1, 1, 2;
  const Barrier h = Barrier::quadratic(Eigen::Vector2d(0.2, 0.4), P, 1.5);
  Rng rng(77);
  for (int k = 0; k < 25; ++k) {
    const Eigen::VectorXd x = rng.in_box(Eigen::Vector2d(-2, -2), Eigen::Vector2d(2, 2));
    CHECK(fd_gradient_check(h, x, 1e-5) <= 1e-6);
  }
}

TEST_CASE("strict margin is the drift term plus the best input can do") {
  const Polytope U = box_input_polytope(2, 1.0);
  const SystemDynamics sys = SystemDynamics::single_integrator(2);
  const Barrier h =
      Barrier::quadratic(Eigen::Vector2d(-0.5, 0.0), Eigen::MatrixXd::Identity(2, 2), 1.0);
  CHECK(strict_cbf_margin(sys, h, U, Eigen::Vector2d(0.5, 0.0)) == doctest::Approx(-2.0));

  // exhausted authority: drift 3 beats u in [-1, 1] at the right boundary
  const SystemDynamics drift = SystemDynamics::linear(
      Eigen::MatrixXd::Zero(1, 1), Eigen::MatrixXd::Identity(1, 1), Eigen::VectorXd::Ones(1) * 3.0);
  const Barrier h1 =
      Barrier::quadratic(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1), 1.0);
  const Polytope U1 = box_input_polytope(1, 1.0);
  CHECK(strict_cbf_margin(drift, h1, U1, Eigen::VectorXd::Ones(1)) == doctest::Approx(4.0));
  CHECK(strict_cbf_margin(drift, h1, U1, -Eigen::VectorXd::Ones(1)) == doctest::Approx(-8.0));
}

TEST_CASE("boundary samples sit on the zero level set") {
  Eigen::MatrixXd P(2, 2);
  P << 2, 0.3, 0.3, 1;
  const Barrier h = Barrier::quadratic(Eigen::Vector2d(0.5, -0.5), P, 1.2);
  const auto pts = boundary_sample(h, 50, 5);
  REQUIRE(pts.size() == 50);
  for (const auto& x : pts) CHECK(std::abs(h.value(x)) <= 1e-9);

  const Barrier aff = Barrier::affine(Eigen::Vector2d(1, 0), 0.0, true);
  CHECK_THROWS_AS(boundary_sample(aff, 3, 1), UnsupportedBarrierKind);
}
