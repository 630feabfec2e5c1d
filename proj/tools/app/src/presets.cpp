#include "optomech_app/presets.hpp"

#include <algorithm>

#include "preset_data.hpp"

namespace optomech::app {

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& p : kEmbeddedPresets) names.emplace_back(p.name);
  std::sort(names.begin(), names.end());
  return names;
}

nlohmann::json preset_json(const std::string& name) {
  for (const auto& p : kEmbeddedPresets) {
    if (name == p.name) return nlohmann::json::parse(p.json);
  }
  std::string available;
  for (const auto& n : preset_names()) available += (available.empty() ? "" : ", ") + n;
  throw ConfigError("preset", "unknown preset '" + name + "' (available: " + available + ")");
}

RunConfig load_preset(const std::string& name) { return parse_config(preset_json(name)); }

}  // namespace optomech::app
