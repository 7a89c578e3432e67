#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "polysafe/batch.hpp"

namespace polysafe {

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// parsed scenario file: system + barriers/alphas/input + policy + sim grid + seeds + starts
struct Scenario {
  SystemDynamics system;
  SafetySpec spec;
  Policy policy;
  SimConfig sim;            // sim.gamma holds the fixed value when !gamma_auto
  bool gamma_auto = false;
  std::vector<std::uint64_t> seeds;
  std::optional<Eigen::VectorXd> x0_explicit;
  int x0_sample_count = 0;  // > 0 when starts are sampled per seed

  Scenario(SystemDynamics system_, SafetySpec spec_, Policy policy_, SimConfig sim_);
};

// strict parse: unknown keys, wrong types, and inconsistent dimensions are
// rejected with a field-path diagnostic
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& text, const std::string& origin = "scenario");

// default-parameter policy for --policy overrides
Policy policy_from_name(const std::string& name, int input_dim);

}  // namespace polysafe
