#pragma once

#include "foghorn/config.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace foghorn::cli {

struct CommonArgs {
  std::optional<std::filesystem::path> config;
  std::optional<int> parallelism;
  std::optional<std::uint64_t> seed;
  bool json = false;
};

/// Loads the config (explicit path, $FOGHORN_CONFIG, or defaults) and
/// applies command-line overrides.
ToolConfig effective_config(const CommonArgs& args);

struct SimulateArgs {
  std::filesystem::path image, disparity, labels, out;
  std::optional<std::filesystem::path> instances;
  std::optional<std::filesystem::path> transmittance_out;
  std::optional<double> beta;
  std::optional<std::vector<double>> light;  // empty optional = config value
  bool allow_haze = false;
};

int cmd_simulate(const SimulateArgs& args, const CommonArgs& common);

struct SweepArgs {
  std::filesystem::path dataset, out;
  std::vector<double> betas;
};

int cmd_sweep(const SweepArgs& args, const CommonArgs& common);

struct DensityTrainArgs {
  std::filesystem::path sweep_root, out;
  double ridge = 1e-8;
};

int cmd_density_train(const DensityTrainArgs& args, const CommonArgs& common);

struct DensityRankArgs {
  std::filesystem::path model, images, out;
  std::optional<std::filesystem::path> exclude;
};

int cmd_density_rank(const DensityRankArgs& args, const CommonArgs& common);

struct CurriculumArgs {
  std::filesystem::path plan;
};

int cmd_curriculum(const CurriculumArgs& args, const CommonArgs& common);

struct EvaluateArgs {
  std::filesystem::path gt_dir, pred_dir;
  std::optional<std::filesystem::path> classes;
  std::optional<std::filesystem::path> out;
};

int cmd_evaluate(const EvaluateArgs& args, const CommonArgs& common);

}  // namespace foghorn::cli
