#include "polysafe/simulator.hpp"

#include <chrono>
#include <limits>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "polysafe/errors.hpp"

namespace polysafe {

const char* to_string(ExitReason r) {
  switch (r) {
    case ExitReason::Completed: return "Completed";
    case ExitReason::LeftOmega: return "LeftOmega";
    case ExitReason::InfeasibleSelection: return "InfeasibleSelection";
  }
  return "Unknown";
}

namespace {

Eigen::VectorXd integrate_step(const SystemDynamics& sys, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& u, double dt, Integrator method) {
  if (method == Integrator::Euler) return x + dt * sys.flow(x, u);
  const Eigen::VectorXd k1 = sys.flow(x, u);
  const Eigen::VectorXd k2 = sys.flow(x + 0.5 * dt * k1, u);
  const Eigen::VectorXd k3 = sys.flow(x + 0.5 * dt * k2, u);
  const Eigen::VectorXd k4 = sys.flow(x + dt * k3, u);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void format_double(char* buf, std::size_t len, double v) { std::snprintf(buf, len, "%.17g", v); }

}  // namespace

SimResult simulate(const SafetySpec& spec, const SystemDynamics& sys, const Policy& policy,
                   const Eigen::VectorXd& x0, const SimConfig& cfg) {
  if (!(cfg.dt > 0)) throw InvalidParameter("simulate: dt must be positive");
  if (!(cfg.T >= cfg.dt)) throw InvalidParameter("simulate: horizon shorter than one step");
  if (cfg.gamma < 0) throw InvalidParameter("simulate: gamma must be nonnegative");
  if (cfg.violation_tol < 0) throw InvalidParameter("simulate: violation_tol must be nonnegative");
  const double steps_real = cfg.T / cfg.dt;
  if (steps_real > 1e7) throw InvalidParameter("simulate: more than 1e7 steps requested");
  const int steps = static_cast<int>(std::llround(steps_real));

  const int n = spec.state_dim();
  const int m = spec.input_dim();
  const int N = spec.num_barriers();
  if (x0.size() != n) throw DimensionMismatch("simulate: start dimension differs");

  for (int i = 0; i < N; ++i) {
    const double h = spec.barriers[i].value(x0);
    if (!(h < 0)) {
      char msg[128];
      std::snprintf(msg, sizeof msg, "simulate: start violates h_%d(x0) < 0 (value %.3e)", i, h);
      throw PreconditionViolated(msg);
    }
  }
  if (!build_K(spec, sys, x0).in_omega)
    throw PreconditionViolated("simulate: start has empty feasible-set interior");

  const auto t_begin = std::chrono::steady_clock::now();

  SimResult res;
  Trajectory& tr = res.trajectory;
  tr.times.resize(steps + 1);
  tr.states.resize(steps + 1, n);
  tr.controls.resize(steps, m);
  tr.h_values.resize(steps + 1, N);
  tr.cheb_radii.resize(steps + 1);

  RunReport& rep = res.report;
  rep.exit_reason = ExitReason::Completed;
  rep.exit_step = -1;

  Eigen::VectorXd x = x0;
  int recorded = 0;
  for (int k = 0; k <= steps; ++k) {
    tr.times[k] = k * cfg.dt;
    tr.states.row(k) = x.transpose();
    tr.h_values.row(k) = spec.barrier_values(x).transpose();
    const FeasibleMapResult fm = build_K(spec, sys, x);
    tr.cheb_radii[k] = fm.cheb.feasible ? fm.cheb.radius : 0.0;
    recorded = k + 1;

    if (!fm.in_omega) {
      rep.exit_reason = ExitReason::LeftOmega;
      rep.exit_step = k;
      break;
    }
    if (k == steps) break;

    Eigen::VectorXd u;
    try {
      u = select_control(policy, spec, sys, x, k, cfg.gamma, &tr.policy_events);
    } catch (const EmptyFeasibleSet&) {
      rep.exit_reason = ExitReason::InfeasibleSelection;
      rep.exit_step = k;
      break;
    }
    tr.controls.row(k) = u.transpose();
    x = integrate_step(sys, x, u, cfg.dt, cfg.integrator);
  }

  tr.times.conservativeResize(recorded);
  tr.states.conservativeResize(recorded, n);
  tr.h_values.conservativeResize(recorded, N);
  tr.cheb_radii.conservativeResize(recorded);
  tr.controls.conservativeResize(recorded - 1, m);

  rep.max_h = tr.h_values.colwise().maxCoeff().transpose();
  rep.min_cheb_radius = tr.cheb_radii.minCoeff();
  for (int k = 0; k < recorded; ++k) {
    for (int i = 0; i < N; ++i) {
      if (tr.h_values(k, i) > cfg.violation_tol)
        rep.violations.push_back({k, i, tr.h_values(k, i)});
    }
  }
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
  return res;
}

InvarianceCheck verify_invariance(const Trajectory& traj, const SafetySpec& spec, double tol) {
  InvarianceCheck chk;
  chk.worst = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < traj.states.rows(); ++k) {
    const Eigen::VectorXd h = spec.barrier_values(traj.states.row(k).transpose());
    for (int i = 0; i < h.size(); ++i) {
      if (h[i] > chk.worst) {
        chk.worst = h[i];
        chk.worst_step = k;
        chk.worst_barrier = i;
      }
    }
  }
  chk.ok = chk.worst <= tol;
  return chk;
}

ConeCheckReport tangent_cone_check(const SafetySpec& spec, const SystemDynamics& sys,
                                   const Trajectory& traj, double band) {
  if (!(band > 0)) throw InvalidParameter("tangent_cone_check: band must be positive");
  ConeCheckReport rep;
  for (int k = 0; k < traj.controls.rows(); ++k) {
    const Eigen::VectorXd x = traj.states.row(k).transpose();
    const Eigen::VectorXd xdot = sys.flow(x, traj.controls.row(k).transpose());
    for (int i = 0; i < spec.num_barriers(); ++i) {
      const double h = spec.barriers[i].value(x);
      if (std::abs(h) > band) continue;
      ++rep.checked;
      double bound = -spec.alphas[i](h) + 1e-8;
      if (std::abs(h) <= 1e-8) bound = std::min(bound, 1e-8);
      const double flow_dot = spec.barriers[i].gradient(x).dot(xdot);
      if (flow_dot > bound) rep.violations.push_back({k, i, flow_dot, bound});
    }
  }
  return rep;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
  const int n = static_cast<int>(traj.states.cols());
  const int m = static_cast<int>(traj.controls.cols());
  const int N = static_cast<int>(traj.h_values.cols());
  out << "t";
  for (int j = 1; j <= n; ++j) out << ",x" << j;
  for (int j = 1; j <= m; ++j) out << ",u" << j;
  for (int j = 1; j <= N; ++j) out << ",h" << j;
  out << ",rc\n";

  char buf[40];
  auto put = [&](double v) {
    format_double(buf, sizeof buf, v);
    out << buf;
  };
  for (int k = 0; k < traj.states.rows(); ++k) {
    put(traj.times[k]);
    for (int j = 0; j < n; ++j) {
      out << ',';
      put(traj.states(k, j));
    }
    for (int j = 0; j < m; ++j) {
      out << ',';
      if (k < traj.controls.rows()) put(traj.controls(k, j));
    }
    for (int j = 0; j < N; ++j) {
      out << ',';
      put(traj.h_values(k, j));
    }
    out << ',';
    put(traj.cheb_radii[k]);
    out << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidParameter("trajectory csv: empty file");

  auto split = [](const std::string& s) {
    std::vector<std::string> f;
    std::size_t start = 0;
    while (true) {
      const std::size_t pos = s.find(',', start);
      if (pos == std::string::npos) {
        f.push_back(s.substr(start));
        break;
      }
      f.push_back(s.substr(start, pos - start));
      start = pos + 1;
    }
    return f;
  };

  const std::vector<std::string> head = split(line);
  int n = 0, m = 0, N = 0;
  if (head.empty() || head.front() != "t" || head.back() != "rc")
    throw InvalidParameter("trajectory csv: unexpected header");
  for (const auto& f : head) {
    if (f.size() > 1 && f[0] == 'x') ++n;
    if (f.size() > 1 && f[0] == 'u') ++m;
    if (f.size() > 1 && f[0] == 'h') ++N;
  }
  if (static_cast<int>(head.size()) != 2 + n + m + N)
    throw InvalidParameter("trajectory csv: unexpected header");

  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = split(line);
    if (f.size() != head.size()) throw InvalidParameter("trajectory csv: ragged row");
    rows.push_back(std::move(f));
  }
  if (rows.empty()) throw InvalidParameter("trajectory csv: no data rows");

  const int K = static_cast<int>(rows.size());
  Trajectory tr;
  tr.times.resize(K);
  tr.states.resize(K, n);
  tr.controls.resize(K - 1, m);
  tr.h_values.resize(K, N);
  tr.cheb_radii.resize(K);
  for (int k = 0; k < K; ++k) {
    const auto& f = rows[k];
    tr.times[k] = std::stod(f[0]);
    for (int j = 0; j < n; ++j) tr.states(k, j) = std::stod(f[1 + j]);
    for (int j = 0; j < m; ++j) {
      const std::string& field = f[1 + n + j];
      if (k < K - 1) {
        if (field.empty()) throw InvalidParameter("trajectory csv: missing control field");
        tr.controls(k, j) = std::stod(field);
      } else if (!field.empty()) {
        throw InvalidParameter("trajectory csv: final row must not carry controls");
      }
    }
    for (int j = 0; j < N; ++j) tr.h_values(k, j) = std::stod(f[1 + n + m + j]);
    tr.cheb_radii[k] = std::stod(f[1 + n + m + N]);
  }
  return tr;
}

void write_run_report(const RunReport& report, std::ostream& out) {
  char buf[40];
  out << "exit_reason: " << to_string(report.exit_reason) << '\n';
  out << "exit_step: " << report.exit_step << '\n';
  out << "max_h:";
  for (int i = 0; i < report.max_h.size(); ++i) {
    format_double(buf, sizeof buf, report.max_h[i]);
    out << ' ' << buf;
  }
  out << '\n';
  format_double(buf, sizeof buf, report.min_cheb_radius);
  out << "min_cheb_radius: " << buf << '\n';
  out << "violations: " << report.violations.size() << '\n';
  for (const auto& v : report.violations) {
    format_double(buf, sizeof buf, v.value);
    out << "violation: step=" << v.step << " barrier=" << v.barrier << " value=" << buf << '\n';
  }
}

}  // namespace polysafe
