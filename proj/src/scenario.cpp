#include "polysafe/scenario.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "polysafe/errors.hpp"

namespace polysafe {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ScenarioError(path + ": " + what);
}

const json& member(const json& j, const char* key, const std::string& path) {
  if (!j.contains(key)) fail(path, std::string("missing key '") + key + "'");
  return j.at(key);
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : allowed) known = known || item.key() == k;
    if (!known) fail(path, "unknown key '" + item.key() + "'");
  }
}

double as_double(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected a boolean");
  return j.get<bool>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

Eigen::VectorXd as_vector(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = as_double(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

Eigen::MatrixXd as_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of rows");
  const Eigen::VectorXd first = as_vector(j[0], path + "[0]");
  Eigen::MatrixXd M(static_cast<Eigen::Index>(j.size()), first.size());
  M.row(0) = first.transpose();
  for (std::size_t r = 1; r < j.size(); ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    const Eigen::VectorXd row = as_vector(j[r], rp);
    if (row.size() != first.size()) fail(rp, "ragged matrix rows");
    M.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return M;
}

std::vector<Eigen::MatrixXd> as_matrix_list(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of matrices");
  std::vector<Eigen::MatrixXd> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(as_matrix(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

SystemDynamics parse_system(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  const std::string kind = as_string(member(j, "kind", path), path + ".kind");
  if (kind == "single_integrator") {
    check_keys(j, path, {"kind", "n"});
    return SystemDynamics::single_integrator(as_int(member(j, "n", path), path + ".n"));
  }
  if (kind == "linear") {
    check_keys(j, path, {"kind", "F", "G0", "d"});
    Eigen::MatrixXd F = as_matrix(member(j, "F", path), path + ".F");
    Eigen::MatrixXd G0 = as_matrix(member(j, "G0", path), path + ".G0");
    Eigen::VectorXd d;
    if (j.contains("d")) d = as_vector(j.at("d"), path + ".d");
    return SystemDynamics::linear(std::move(F), std::move(G0), std::move(d));
  }
  if (kind == "affine_quadratic") {
    check_keys(j, path, {"kind", "n", "m", "F", "d", "drift_quad", "G0", "G_state"});
    const int n = as_int(member(j, "n", path), path + ".n");
    const int m = as_int(member(j, "m", path), path + ".m");
    return SystemDynamics::affine_quadratic(
        n, m, as_matrix(member(j, "F", path), path + ".F"),
        as_vector(member(j, "d", path), path + ".d"),
        as_matrix_list(member(j, "drift_quad", path), path + ".drift_quad"),
        as_matrix(member(j, "G0", path), path + ".G0"),
        as_matrix_list(member(j, "G_state", path), path + ".G_state"));
  }
  fail(path + ".kind", "unknown system kind '" + kind + "'");
}

Barrier parse_barrier(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  const std::string kind = as_string(member(j, "kind", path), path + ".kind");
  if (kind == "quadratic") {
    check_keys(j, path, {"kind", "center", "shape", "level"});
    return Barrier::quadratic(as_vector(member(j, "center", path), path + ".center"),
                              as_matrix(member(j, "shape", path), path + ".shape"),
                              as_double(member(j, "level", path), path + ".level"));
  }
  if (kind == "affine") {
    check_keys(j, path, {"kind", "normal", "offset", "acknowledge_noncompact"});
    return Barrier::affine(
        as_vector(member(j, "normal", path), path + ".normal"),
        as_double(member(j, "offset", path), path + ".offset"),
        as_bool(member(j, "acknowledge_noncompact", path), path + ".acknowledge_noncompact"));
  }
  fail(path + ".kind", "unknown barrier kind '" + kind + "'");
}

AlphaFunction parse_alpha(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  check_keys(j, path, {"kind", "gain"});
  const std::string kind = as_string(member(j, "kind", path), path + ".kind");
  const double gain = as_double(member(j, "gain", path), path + ".gain");
  if (kind == "linear") return AlphaFunction::linear(gain);
  if (kind == "cubic") return AlphaFunction::cubic(gain);
  fail(path + ".kind", "unknown alpha kind '" + kind + "'");
}

Polytope parse_input(const json& j, const std::string& path, int m) {
  if (!j.is_object()) fail(path, "expected an object");
  const std::string kind = as_string(member(j, "kind", path), path + ".kind");
  if (kind == "box") {
    check_keys(j, path, {"kind", "u_max"});
    return box_input_polytope(m, as_double(member(j, "u_max", path), path + ".u_max"));
  }
  if (kind == "polytope") {
    check_keys(j, path, {"kind", "A", "b"});
    Polytope P;
    P.A = as_matrix(member(j, "A", path), path + ".A");
    P.b = as_vector(member(j, "b", path), path + ".b");
    if (P.A.rows() != P.b.size()) fail(path, "A and b row counts differ");
    if (P.A.cols() != m) fail(path + ".A", "column count must equal the input dimension");
    return P;
  }
  fail(path + ".kind", "unknown input kind '" + kind + "'");
}

ObjectiveChoice parse_objective(const json& j, const std::string& path) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "feasibility") return ObjectiveChoice::feasibility();
    fail(path, "unknown objective '" + s + "'");
  }
  if (!j.is_object()) fail(path, "expected 'feasibility' or an objective object");
  const std::string kind = as_string(member(j, "kind", path), path + ".kind");
  if (kind == "linear_cost") {
    check_keys(j, path, {"kind", "cost"});
    return ObjectiveChoice::linear_cost_of(as_vector(member(j, "cost", path), path + ".cost"));
  }
  if (kind == "tracking") {
    check_keys(j, path, {"kind", "u_nom", "weights"});
    Eigen::VectorXd w;
    if (j.contains("weights")) w = as_vector(j.at("weights"), path + ".weights");
    return ObjectiveChoice::tracking(as_vector(member(j, "u_nom", path), path + ".u_nom"),
                                     std::move(w));
  }
  fail(path + ".kind", "unknown objective kind '" + kind + "'");
}

Policy parse_policy(const json& j, const std::string& path, int n, int m) {
  if (!j.is_object()) fail(path, "expected an object");
  const std::string kind = as_string(member(j, "kind", path), path + ".kind");
  if (kind == "chebyshev_center") {
    check_keys(j, path, {"kind"});
    return Policy::chebyshev_center();
  }
  if (kind == "qp_tracking") {
    check_keys(j, path, {"kind", "u_nom", "feedback", "weights"});
    if (j.contains("u_nom") && j.contains("feedback"))
      fail(path, "'u_nom' and 'feedback' are mutually exclusive");
    Eigen::VectorXd w;
    if (j.contains("weights")) {
      w = as_vector(j.at("weights"), path + ".weights");
      if (w.size() != m) fail(path + ".weights", "size must equal the input dimension");
    }
    if (j.contains("feedback")) {
      Eigen::MatrixXd K = as_matrix(j.at("feedback"), path + ".feedback");
      if (K.rows() != m || K.cols() != n)
        fail(path + ".feedback", "shape must be input dimension by state dimension");
      return Policy::qp_tracking_feedback(std::move(K), std::move(w));
    }
    Eigen::VectorXd u_nom = Eigen::VectorXd::Zero(m);
    if (j.contains("u_nom")) {
      u_nom = as_vector(j.at("u_nom"), path + ".u_nom");
      if (u_nom.size() != m) fail(path + ".u_nom", "size must equal the input dimension");
    }
    return Policy::qp_tracking(std::move(u_nom), std::move(w));
  }
  if (kind == "lp_vertex") {
    check_keys(j, path, {"kind", "cost"});
    Eigen::VectorXd c = as_vector(member(j, "cost", path), path + ".cost");
    if (c.size() != m) fail(path + ".cost", "size must equal the input dimension");
    return Policy::lp_vertex(std::move(c));
  }
  if (kind == "rotating_vertex") {
    check_keys(j, path, {"kind", "costs", "period"});
    const json& jc = member(j, "costs", path);
    if (!jc.is_array() || jc.empty()) fail(path + ".costs", "expected a nonempty array");
    std::vector<Eigen::VectorXd> costs;
    for (std::size_t i = 0; i < jc.size(); ++i) {
      const std::string cp = path + ".costs[" + std::to_string(i) + "]";
      costs.push_back(as_vector(jc[i], cp));
      if (costs.back().size() != m) fail(cp, "size must equal the input dimension");
    }
    int period = 1;
    if (j.contains("period")) period = as_int(j.at("period"), path + ".period");
    return Policy::rotating_vertex(std::move(costs), period);
  }
  if (kind == "safety_program") {
    check_keys(j, path, {"kind", "objective"});
    ObjectiveChoice obj = ObjectiveChoice::feasibility();
    if (j.contains("objective")) obj = parse_objective(j.at("objective"), path + ".objective");
    return Policy::safety_program(std::move(obj));
  }
  fail(path + ".kind", "unknown policy kind '" + kind + "'");
}

}  // namespace

Scenario::Scenario(SystemDynamics system_, SafetySpec spec_, Policy policy_, SimConfig sim_)
    : system(std::move(system_)),
      spec(std::move(spec_)),
      policy(std::move(policy_)),
      sim(sim_) {
  if (spec.state_dim() != system.n)
    throw DimensionMismatch("scenario: barrier dimension does not match the system state");
  if (spec.input_dim() != system.m)
    throw DimensionMismatch("scenario: input set dimension does not match the system input");
}

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(origin, e.what());
  }
  check_keys(j, origin, {"system", "barriers", "alphas", "input", "policy", "sim", "seeds", "x0"});
  for (const char* key : {"system", "barriers", "alphas", "input", "policy", "sim", "seeds", "x0"})
    member(j, key, origin);

  try {
    SystemDynamics sys = parse_system(j.at("system"), origin + ".system");

    const json& jb = j.at("barriers");
    if (!jb.is_array() || jb.empty()) fail(origin + ".barriers", "expected a nonempty array");
    std::vector<Barrier> barriers;
    for (std::size_t i = 0; i < jb.size(); ++i)
      barriers.push_back(parse_barrier(jb[i], origin + ".barriers[" + std::to_string(i) + "]"));

    const json& ja = j.at("alphas");
    if (!ja.is_array()) fail(origin + ".alphas", "expected an array");
    std::vector<AlphaFunction> alphas;
    for (std::size_t i = 0; i < ja.size(); ++i)
      alphas.push_back(parse_alpha(ja[i], origin + ".alphas[" + std::to_string(i) + "]"));

    Polytope input = parse_input(j.at("input"), origin + ".input", sys.m);
    Policy policy = parse_policy(j.at("policy"), origin + ".policy", sys.n, sys.m);

    const json& js = j.at("sim");
    check_keys(js, origin + ".sim", {"dt", "T", "integrator", "gamma", "violation_tol"});
    SimConfig sim;
    sim.dt = as_double(member(js, "dt", origin + ".sim"), origin + ".sim.dt");
    sim.T = as_double(member(js, "T", origin + ".sim"), origin + ".sim.T");
    if (js.contains("integrator")) {
      const std::string integ = as_string(js.at("integrator"), origin + ".sim.integrator");
      if (integ == "euler")
        sim.integrator = Integrator::Euler;
      else if (integ == "rk4")
        sim.integrator = Integrator::RK4;
      else
        fail(origin + ".sim.integrator", "unknown integrator '" + integ + "'");
    }
    if (js.contains("violation_tol"))
      sim.violation_tol = as_double(js.at("violation_tol"), origin + ".sim.violation_tol");

    bool gamma_auto = false;
    const json& jg = member(js, "gamma", origin + ".sim");
    if (jg.is_string()) {
      if (jg.get<std::string>() != "auto")
        fail(origin + ".sim.gamma", "expected a number or 'auto'");
      gamma_auto = true;
    } else {
      sim.gamma = as_double(jg, origin + ".sim.gamma");
      if (sim.gamma < 0) fail(origin + ".sim.gamma", "must be nonnegative");
    }

    const json& jseeds = j.at("seeds");
    if (!jseeds.is_array() || jseeds.empty())
      fail(origin + ".seeds", "expected a nonempty array of nonnegative integers");
    std::vector<std::uint64_t> seeds;
    for (std::size_t i = 0; i < jseeds.size(); ++i) {
      const std::string sp = origin + ".seeds[" + std::to_string(i) + "]";
      if (!jseeds[i].is_number_unsigned()) fail(sp, "expected a nonnegative integer");
      seeds.push_back(jseeds[i].get<std::uint64_t>());
    }

    Scenario sc(std::move(sys),
                SafetySpec(std::move(barriers), std::move(alphas), std::move(input)),
                std::move(policy), sim);
    sc.gamma_auto = gamma_auto;
    sc.seeds = std::move(seeds);

    const json& jx = j.at("x0");
    if (jx.is_array()) {
      Eigen::VectorXd x0 = as_vector(jx, origin + ".x0");
      if (x0.size() != sc.system.n)
        fail(origin + ".x0", "size must equal the state dimension");
      sc.x0_explicit = std::move(x0);
    } else if (jx.is_object()) {
      check_keys(jx, origin + ".x0", {"sample"});
      sc.x0_sample_count = as_int(member(jx, "sample", origin + ".x0"), origin + ".x0.sample");
      if (sc.x0_sample_count < 1) fail(origin + ".x0.sample", "must be positive");
    } else {
      fail(origin + ".x0", "expected an array or {\"sample\": count}");
    }
    return sc;
  } catch (const ScenarioError&) {
    throw;
  } catch (const std::exception& e) {
    fail(origin, e.what());
  }
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path + ": cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

Policy policy_from_name(const std::string& name, int input_dim) {
  if (name == "chebyshev_center") return Policy::chebyshev_center();
  if (name == "qp_tracking") return Policy::qp_tracking(Eigen::VectorXd::Zero(input_dim));
  if (name == "lp_vertex") return Policy::lp_vertex(Eigen::VectorXd::Ones(input_dim));
  if (name == "rotating_vertex")
    return Policy::rotating_vertex(
        {Eigen::VectorXd::Ones(input_dim), -Eigen::VectorXd::Ones(input_dim)}, 1);
  if (name == "safety_program") return Policy::safety_program(ObjectiveChoice::feasibility());
  throw ScenarioError("unknown policy name '" + name + "'");
}

}  // namespace polysafe
