#include "polysafe/batch.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace polysafe {

BatchResult run_batch(const SafetySpec& spec, const SystemDynamics& sys, const Policy& policy,
                      const std::vector<RunCase>& cases, const SimConfig& cfg, bool parallel) {
  BatchResult out;
  const int n = static_cast<int>(cases.size());
  out.results.resize(n);
  out.errors.assign(n, std::string());

  auto run_one = [&](int k) {
    try {
      out.results[k] = simulate(spec, sys, policy, cases[k].x0, cfg);
    } catch (const std::exception& e) {
      out.errors[k] = e.what();
    }
  };
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < n; ++k) run_one(k);
  } else {
    for (int k = 0; k < n; ++k) run_one(k);
  }

  out.worst_h = -std::numeric_limits<double>::infinity();
  out.completed = 0;
  for (int k = 0; k < n; ++k) {
    if (!out.errors[k].empty()) continue;
    const RunReport& rep = out.results[k].report;
    if (rep.exit_reason == ExitReason::Completed) ++out.completed;
    if (rep.max_h.size() > 0) out.worst_h = std::max(out.worst_h, rep.max_h.maxCoeff());
  }
  return out;
}

}  // namespace polysafe
