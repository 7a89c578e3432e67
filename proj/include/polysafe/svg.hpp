#pragma once

#include <iosfwd>

#include "polysafe/feasible_map.hpp"
#include "polysafe/simulator.hpp"

namespace polysafe {

// planar (n = 2) plot: barrier zero-level curves as 256-point polylines,
// trajectory polyline, start/end markers; output is byte-deterministic
void write_trajectory_svg(const Trajectory& traj, const SafetySpec& spec, std::ostream& out);

}  // namespace polysafe
