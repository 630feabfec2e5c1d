#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "optomech_app/config.hpp"

namespace optomech::app {

/// Names of the built-in presets, sorted.
std::vector<std::string> preset_names();

/// Raw preset document. Throws ConfigError listing the available names for an
/// unknown preset.
nlohmann::json preset_json(const std::string& name);

RunConfig load_preset(const std::string& name);

}  // namespace optomech::app
