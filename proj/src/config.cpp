#include "foghorn/config.hpp"

#include <json.hpp>

#include <cstdlib>
#include <fstream>

namespace foghorn {

namespace {

using nlohmann::json;

void read_camera(const json& j, CameraModel& cam) {
  cam.baseline_m = j.value("baseline_m", cam.baseline_m);
  cam.focal_length_px = j.value("focal_length_px", cam.focal_length_px);
}

void read_fog(const json& j, FogConfig& fog) {
  fog.beta = j.value("beta", fog.beta);
  fog.allow_haze = j.value("allow_haze", fog.allow_haze);
  if (j.contains("atmospheric_light")) {
    const auto& light = j.at("atmospheric_light");
    if (light.is_string()) {
      if (light.get<std::string>() != "auto") {
        throw std::runtime_error("atmospheric_light must be \"auto\" or an [r,g,b] triple");
      }
      fog.atmospheric_light.reset();
    } else {
      const auto values = light.get<std::vector<double>>();
      if (values.size() != 3) {
        throw std::runtime_error("atmospheric_light must have exactly 3 channels");
      }
      fog.atmospheric_light = {values[0], values[1], values[2]};
    }
  }
}

void read_completion(const json& j, CompletionParams& c) {
  c.superpixel_count = j.value("superpixels", c.superpixel_count);
  c.compactness = j.value("compactness", c.compactness);
  c.ransac_iters = j.value("ransac_iters", c.ransac_iters);
  c.inlier_tol_m = j.value("inlier_tol_m", c.inlier_tol_m);
  c.min_valid_fraction = j.value("min_valid_fraction", c.min_valid_fraction);
}

void read_filter(const json& j, FilterParams& f, GridOptions& g) {
  f.mu = j.value("mu", f.mu);
  f.sigma_s = j.value("sigma_s", f.sigma_s);
  f.sigma_c = j.value("sigma_c", f.sigma_c);
  if (j.contains("window_radius")) {
    f.window_radius = j.at("window_radius").get<int>();
  } else {
    f.window_radius = static_cast<int>(std::ceil(3.0 * f.sigma_s));
  }
  g.spatial_cell = j.value("grid_spatial_cell", 0.0);
  g.color_cell = j.value("grid_color_cell", 0.0);
  if (j.contains("grid_memory_cap_mb")) {
    g.memory_cap_bytes = j.at("grid_memory_cap_mb").get<std::size_t>() << 20;
  }
}

}  // namespace

void ToolConfig::validate() const {
  camera.validate();
  fog.validate();
  completion.validate();
  filter.validate();
  if (parallelism < 0) throw std::invalid_argument("parallelism must be non-negative");
  if (density_model && !std::filesystem::exists(*density_model)) {
    throw std::invalid_argument("density model path does not exist: " + density_model->string());
  }
}

ToolConfig parse_tool_config(const std::string& json_text) {
  const json j = json::parse(json_text);
  ToolConfig cfg;
  if (j.contains("camera")) read_camera(j.at("camera"), cfg.camera);
  if (j.contains("fog")) read_fog(j.at("fog"), cfg.fog);
  if (j.contains("completion")) read_completion(j.at("completion"), cfg.completion);
  if (j.contains("filter")) read_filter(j.at("filter"), cfg.filter, cfg.grid);
  if (j.contains("density_model")) {
    cfg.density_model = std::filesystem::path(j.at("density_model").get<std::string>());
  }
  cfg.parallelism = j.value("parallelism", cfg.parallelism);
  cfg.seed = j.value("seed", cfg.seed);
  return cfg;
}

ToolConfig load_tool_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path.string() + ": cannot open config");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return parse_tool_config(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

ToolConfig resolve_tool_config(const std::optional<std::filesystem::path>& explicit_path) {
  if (explicit_path) return load_tool_config(*explicit_path);
  if (const char* env = std::getenv("FOGHORN_CONFIG")) {
    return load_tool_config(env);
  }
  return ToolConfig{};
}

}  // namespace foghorn
