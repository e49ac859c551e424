#pragma once

#include "foghorn/bilateral.hpp"
#include "foghorn/depth_completion.hpp"
#include "foghorn/fog.hpp"
#include "foghorn/imaging.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace foghorn {

/// Shared tool configuration, loaded from JSON. Every field has a default;
/// a fixed seed makes every run fully deterministic.
struct ToolConfig {
  CameraModel camera;
  FogConfig fog;
  CompletionParams completion;
  FilterParams filter;
  GridOptions grid;
  std::optional<std::filesystem::path> density_model;
  int parallelism = 0;  // 0 = all cores
  std::uint64_t seed = 1;

  void validate() const;
};

ToolConfig parse_tool_config(const std::string& json_text);
ToolConfig load_tool_config(const std::filesystem::path& path);

/// Resolves the config: explicit path if given, else $FOGHORN_CONFIG,
/// else built-in defaults.
ToolConfig resolve_tool_config(const std::optional<std::filesystem::path>& explicit_path);

}  // namespace foghorn
