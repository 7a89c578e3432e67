#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <vector>

#include "polysafe/policy.hpp"

namespace polysafe {

enum class Integrator { Euler, RK4 };

struct SimConfig {
  double dt = 1e-3;
  double T = 1.0;
  Integrator integrator = Integrator::RK4;
  double gamma = 0.0;
  double violation_tol = 1e-6;
};

struct Trajectory {
  Eigen::VectorXd times;    // k entries, uniform spacing dt
  Eigen::MatrixXd states;   // k x n
  Eigen::MatrixXd controls; // (k-1) x m, sample-and-hold on [t_j, t_{j+1})
  Eigen::MatrixXd h_values; // k x N, recorded at each state
  Eigen::VectorXd cheb_radii;
  std::vector<PolicyEvent> policy_events;
};

struct Violation {
  int step = 0;
  int barrier = 0;
  double value = 0.0;
};

enum class ExitReason { Completed, LeftOmega, InfeasibleSelection };
const char* to_string(ExitReason r);

struct RunReport {
  Eigen::VectorXd max_h;  // per barrier, over all recorded states
  double min_cheb_radius = 0.0;
  std::vector<Violation> violations;  // h above violation_tol
  ExitReason exit_reason = ExitReason::Completed;
  int exit_step = -1;  // step of early exit, -1 when Completed
  double wall_time = 0.0;
};

struct SimResult {
  Trajectory trajectory;
  RunReport report;
};

// closed-loop sample-and-hold simulation; requires h_i(x0) < 0 for all i and
// x0 inside the feasible-map domain (PreconditionViolated otherwise)
SimResult simulate(const SafetySpec& spec, const SystemDynamics& sys, const Policy& policy,
                   const Eigen::VectorXd& x0, const SimConfig& cfg);

// h recomputed from states, not trusted from the trajectory record
struct InvarianceCheck {
  bool ok = false;
  double worst = 0.0;
  int worst_step = 0;
  int worst_barrier = 0;
};
InvarianceCheck verify_invariance(const Trajectory& traj, const SafetySpec& spec, double tol);

// flow-direction audit along a recorded trajectory: for every recorded (x, u)
// and barrier with |h_i| <= band, <grad h_i, f+gu> <= -alpha_i(h_i) + 1e-8;
// at |h_i| <= 1e-8 this is the tangent-cone membership check <grad h_i, xdot> <= 1e-8
struct ConeCheckEntry {
  int step = 0;
  int barrier = 0;
  double flow_dot = 0.0;
  double bound = 0.0;
};
struct ConeCheckReport {
  int checked = 0;
  std::vector<ConeCheckEntry> violations;
};
ConeCheckReport tangent_cone_check(const SafetySpec& spec, const SystemDynamics& sys,
                                   const Trajectory& traj, double band = 0.05);

// header t,x1..xn,u1..um,h1..hN,rc; control fields of the final row are empty
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);
Trajectory read_trajectory_csv(std::istream& in);

// all RunReport fields except wall_time (kept out of files so repeated runs
// are byte-identical); wall_time is surfaced on the console instead
void write_run_report(const RunReport& report, std::ostream& out);

}  // namespace polysafe
