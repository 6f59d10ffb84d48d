#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dvpp/scenario.hpp"

namespace dvpp {

// Built-in 4-bus scenarios: three DVPP nodes (1-3) and one synchronous-generator node (4).
//   s1             steps in unmeasured power, no stochastic signals, 60 s
//   s2             stochastic load/RES, SG trip and DVPP inertia support at 10 s, 40 s
//   s2-no-support  s2 with the DVPP inertia held at 0.01 s
ScenarioSpec preset(std::string_view name);
std::vector<std::string> preset_names();

}  // namespace dvpp
