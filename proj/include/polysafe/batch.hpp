#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polysafe/simulator.hpp"

namespace polysafe {

struct RunCase {
  std::uint64_t seed = 0;
  int index = 0;
  Eigen::VectorXd x0;
};

struct BatchResult {
  std::vector<SimResult> results;     // aligned with cases
  std::vector<std::string> errors;    // empty string when the case ran
  double worst_h = 0.0;               // over all successful cases
  int completed = 0;                  // cases that exited Completed
};

BatchResult run_batch(const SafetySpec& spec, const SystemDynamics& sys, const Policy& policy,
                      const std::vector<RunCase>& cases, const SimConfig& cfg,
                      bool parallel = true);

}  // namespace polysafe
