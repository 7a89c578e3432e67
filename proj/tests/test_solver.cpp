#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "oracles.hpp"
#include "polysafe/errors.hpp"
#include "polysafe/rng.hpp"
#include "polysafe/solver.hpp"

using namespace polysafe;

namespace {

LinearProgram make_lp(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                      const Eigen::VectorXd& b) {
  LinearProgram lp;
  lp.c = c;
  lp.constraints.A = A;
  lp.constraints.b = b;
  return lp;
}

// unit box plus a few random halfplanes; roughly a third come out empty
Polytope random_instance(Rng& rng, int n, int extra) {
  Polytope P = box_input_polytope(n, rng.uniform(0.5, 1.5));
  Eigen::MatrixXd A(P.rows() + extra, n);
  Eigen::VectorXd b(P.rows() + extra);
  A.topRows(P.rows()) = P.A;
  b.head(P.rows()) = P.b;
  for (int i = 0; i < extra; ++i) {
    A.row(P.rows() + i) = rng.unit_vector(n).transpose();
    b[P.rows() + i] = rng.uniform(-1.2, 1.0);
  }
  P.A = A;
  P.b = b;
  return P;
}

}  // namespace

TEST_CASE("simplex solves the inscribed-ball program of the unit box") {
  // variables (x1, x2, r); rows A x + ||A_i|| r <= b plus -r <= 0
  Eigen::MatrixXd A(5, 3);
  Eigen::VectorXd b(5);
  A << 1, 0, 1, -1, 0, 1, 0, 1, 1, 0, -1, 1, 0, 0, -1;
  b << 1, 1, 1, 1, 0;
  const SolveOutcome s = solve_lp(make_lp(Eigen::Vector3d(0, 0, -1), A, b));
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.point[2] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.objective == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("simplex basic interval cases") {
  Eigen::MatrixXd A(2, 1);
  Eigen::VectorXd b(2);
  A << 1, -1;

  b << 0, 1;  // [-1, 0]
  SolveOutcome s = solve_lp(make_lp(Eigen::VectorXd::Ones(1), A, b));
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.point[0] == doctest::Approx(-1.0).epsilon(1e-12));

  b << 0, -1;  // u >= 1 and u <= 0
  CHECK(solve_lp(make_lp(Eigen::VectorXd::Ones(1), A, b)).status == SolveStatus::Infeasible);

  Eigen::MatrixXd Ah(1, 1);
  Ah << -1;  // u >= 0, minimize -u
  CHECK(solve_lp(make_lp(-Eigen::VectorXd::Ones(1), Ah, -Eigen::VectorXd::Zero(1))).status ==
        SolveStatus::Unbounded);
}

TEST_CASE("simplex terminates on a degenerate optimum") {
  // five constraints active at (1,1)
  Eigen::MatrixXd A(7, 2);
  Eigen::VectorXd b(7);
  A << 1, 0, 0, 1, 1, 1, 2, 1, 1, 2, -1, 0, 0, -1;
  b << 1, 1, 2, 3, 3, 0, 0;
  const SolveOutcome s = solve_lp(make_lp(Eigen::Vector2d(-1, -1), A, b));
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.point.isApprox(Eigen::Vector2d(1, 1), 1e-9));
  CHECK(s.objective == doctest::Approx(-2.0).epsilon(1e-10));
}

TEST_CASE("lp agrees with vertex enumeration on seeded instances") {
  Rng rng(1001);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform(1.0, 3.0));  // 2 or 3
    const Polytope P = random_instance(rng, n, 2);
    Eigen::VectorXd c(n);
    for (int i = 0; i < n; ++i) c[i] = rng.normal();
    const auto oracle = oracles::lp_by_vertices(c, P);
    if (!oracle.decisive) continue;
    ++checked;
    const SolveOutcome s = solve_lp(make_lp(c, P.A, P.b));
    if (!oracle.feasible) {
      CHECK(s.status == SolveStatus::Infeasible);
      continue;
    }
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(std::abs(s.objective - oracle.objective) <= 1e-6);
    if (oracle.uniqueness_gap > 1e-7) CHECK((s.point - oracle.point).norm() <= 1e-5);
  }
  CHECK(checked >= 40);
}

TEST_CASE("qp projection and equality-like cases") {
  QuadraticProgram qp;
  qp.Q = 2.0 * Eigen::MatrixXd::Identity(2, 2);
  qp.c = -2.0 * Eigen::Vector2d(2.0, 0.0);
  qp.constraints = box_input_polytope(2, 1.0);
  SolveOutcome s = solve_qp(qp);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.point.isApprox(Eigen::Vector2d(1.0, 0.0), 1e-8));
  CHECK(s.kkt_residual <= 1e-6);

  qp.Q = 2.0 * Eigen::MatrixXd::Identity(2, 2);
  qp.c = Eigen::Vector2d::Zero();
  qp.constraints.A.resize(1, 2);
  qp.constraints.A << -1, 0;  // z1 >= 1
  qp.constraints.b.resize(1);
  qp.constraints.b << -1;
  s = solve_qp(qp);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.point.isApprox(Eigen::Vector2d(1.0, 0.0), 1e-8));
}

TEST_CASE("qp with interior optimum matches the grid oracle") {
  QuadraticProgram qp;
  qp.Q = Eigen::Vector2d(1.0, 2.0).asDiagonal();
  qp.c = Eigen::Vector2d(-1.0, -1.0);
  qp.constraints = box_input_polytope(2, 1.0);
  const SolveOutcome s = solve_qp(qp);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.point.isApprox(Eigen::Vector2d(1.0, 0.5), 1e-8));
  CHECK(s.objective == doctest::Approx(-0.75).epsilon(1e-10));

  const double grid = oracles::grid_qp_min(qp.Q, qp.c, qp.constraints, Eigen::Vector2d(-1, -1),
                                           Eigen::Vector2d(1, 1), 1001);
  CHECK(std::abs(grid - s.objective) <= 1e-3);
}

TEST_CASE("qp input validation and ridge") {
  QuadraticProgram qp;
  qp.Q.resize(2, 2);
  qp.Q << 1, 0.5, 0.0, 1;  // asymmetric
  qp.c = Eigen::Vector2d::Zero();
  qp.constraints = box_input_polytope(2, 1.0);
  CHECK_THROWS_AS(solve_qp(qp), InvalidParameter);

  qp.Q << 1, 0, 0, -1;  // indefinite
  CHECK_THROWS_AS(solve_qp(qp), InvalidParameter);

  qp.Q << 2, 0, 0, 0;  // semidefinite: ridge kicks in
  qp.c = Eigen::Vector2d(0.0, 1.0);
  const SolveOutcome s = solve_qp(qp);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.ridge_applied);
  CHECK(s.point[1] == doctest::Approx(-1.0).epsilon(1e-7));

  qp.Q = 2.0 * Eigen::MatrixXd::Identity(2, 2);
  qp.constraints.A.resize(2, 2);
  qp.constraints.A << 1, 0, -1, 0;
  qp.constraints.b.resize(2);
  qp.constraints.b << -2, 1;  // z1 <= -2 and z1 >= -1
  CHECK(solve_qp(qp).status == SolveStatus::Infeasible);
}

TEST_CASE("qp agrees with kkt subset enumeration on seeded instances") {
  Rng rng(2002);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform(1.0, 3.0));
    const Polytope P = random_instance(rng, n, 2);
    Eigen::MatrixXd M(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) M(i, j) = rng.normal();
    QuadraticProgram qp;
    qp.Q = M.transpose() * M + Eigen::MatrixXd::Identity(n, n);
    qp.c.resize(n);
    for (int i = 0; i < n; ++i) qp.c[i] = rng.normal();
    qp.constraints = P;

    const auto oracle = oracles::qp_by_active_subsets(qp.Q, qp.c, P);
    if (!oracle.decisive) continue;
    ++checked;
    const SolveOutcome s = solve_qp(qp);
    if (!oracle.feasible) {
      CHECK(s.status == SolveStatus::Infeasible);
      continue;
    }
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(std::abs(s.objective - oracle.objective) <= 1e-6);
    CHECK((s.point - oracle.point).norm() <= 1e-5);
    CHECK(s.kkt_residual <= 1e-6);
  }
  CHECK(checked >= 40);
}
