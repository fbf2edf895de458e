#pragma once

// YAML scenario files (schema_version 1) and dotted key=value overrides.

#include <filesystem>
#include <string>
#include <vector>

#include "pathfollow/sim.hpp"

namespace pathfollow {

inline constexpr int kSchemaVersion = 1;

/// Leaf keys accepted in a scenario file or by --set. List indices are '#'.
const std::vector<std::string>& schema_keys();

/// "a.b=c" -> {"a.b", "c"}. Throws ConfigError when there is no '='.
std::pair<std::string, std::string> split_override(const std::string& assignment);

/// Throws ConfigError for unknown keys, bad values, missing files or a wrong
/// schema_version. Relative ship.file paths resolve against base_dir.
ScenarioConfig parse_config(const std::string& yaml_text,
                            const std::vector<std::string>& overrides = {},
                            const std::filesystem::path& base_dir = ".");

ScenarioConfig load_config(const std::filesystem::path& file,
                           const std::vector<std::string>& overrides = {});

}  // namespace pathfollow
