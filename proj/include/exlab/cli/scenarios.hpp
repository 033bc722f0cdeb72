#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace exlab::cli {

struct ScenarioInfo {
  std::string name;
  std::string anchor;       // the result the scenario exercises
  std::string description;  // one line
};

const std::vector<ScenarioInfo>& scenario_registry();

// Throws ConfigError listing the valid names.
const ScenarioInfo& find_scenario(std::string_view name);

}  // namespace exlab::cli
