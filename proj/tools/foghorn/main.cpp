#include "commands.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

constexpr int kExitDomainError = 1;
constexpr int kExitUsageError = 2;

void add_common(CLI::App* cmd, foghorn::cli::CommonArgs& common) {
  cmd->add_option("--config", common.config,
                  "JSON config file (falls back to $FOGHORN_CONFIG, then defaults)");
  cmd->add_option("--parallelism", common.parallelism,
                  "worker threads; 0 = all cores (output is identical for any degree)");
  cmd->add_option("--seed", common.seed, "seed for all randomized stages");
  cmd->add_flag("--json", common.json, "machine-readable output on stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"foghorn: physically-modeled fog rendering, fog-density ranking, and "
               "curriculum dataset tooling"};
  app.require_subcommand(1);

  foghorn::cli::CommonArgs common;

  foghorn::cli::SimulateArgs simulate_args;
  CLI::App* simulate = app.add_subcommand("simulate", "render fog onto one clear scene");
  simulate->add_option("--image", simulate_args.image, "clear RGB PNG")->required();
  simulate->add_option("--disparity", simulate_args.disparity, "16-bit disparity PNG")
      ->required();
  simulate->add_option("--labels", simulate_args.labels, "8-bit class-id PNG")->required();
  simulate->add_option("--instances", simulate_args.instances, "16-bit instance-id PNG");
  simulate->add_option("--out", simulate_args.out, "output foggy PNG")->required();
  simulate->add_option("--transmittance-out", simulate_args.transmittance_out,
                       "optional 16-bit transmittance PNG");
  simulate->add_option("--beta", simulate_args.beta, "attenuation coefficient (1/m)");
  simulate->add_option("--light", simulate_args.light,
                       "atmospheric light as r g b in [0,1] (default: estimated)")
      ->expected(3);
  simulate->add_flag("--allow-haze", simulate_args.allow_haze,
                     "permit 0 < beta < 2.996e-3 (MOR beyond 1 km)");
  add_common(simulate, common);

  foghorn::cli::SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand("sweep", "render a dataset at several fog densities");
  sweep->add_option("--dataset", sweep_args.dataset, "clear dataset root (rgb/disparity/labels)")
      ->required();
  sweep->add_option("--out", sweep_args.out, "output root; one beta_<value> dir per density")
      ->required();
  sweep->add_option("--betas", sweep_args.betas, "attenuation coefficients (1/m)")
      ->required()
      ->delimiter(',');
  add_common(sweep, common);

  foghorn::cli::DensityTrainArgs train_args;
  CLI::App* train = app.add_subcommand("density-train",
                                       "fit the fog-density regressor on a rendered sweep");
  train->add_option("--sweep-root", train_args.sweep_root, "sweep output root")->required();
  train->add_option("--out", train_args.out, "model JSON path")->required();
  train->add_option("--ridge", train_args.ridge, "ridge penalty (default 1e-8)");
  add_common(train, common);

  foghorn::cli::DensityRankArgs rank_args;
  CLI::App* rank = app.add_subcommand("density-rank", "rank images by estimated fog density");
  rank->add_option("--model", rank_args.model, "density model JSON")->required();
  rank->add_option("--images", rank_args.images, "directory of images to rank")->required();
  rank->add_option("--out", rank_args.out, "output JSON-lines ranking")->required();
  rank->add_option("--exclude", rank_args.exclude, "exclusion list (one image id per line)");
  add_common(rank, common);

  foghorn::cli::CurriculumArgs curriculum_args;
  CLI::App* curriculum = app.add_subcommand("curriculum",
                                            "run the curriculum pipeline from a plan file");
  curriculum->add_option("--plan", curriculum_args.plan, "curriculum plan JSON")->required();
  add_common(curriculum, common);

  foghorn::cli::EvaluateArgs evaluate_args;
  CLI::App* evaluate = app.add_subcommand("evaluate",
                                          "mean IoU of predicted vs ground-truth labels");
  evaluate->add_option("--gt", evaluate_args.gt_dir, "ground-truth label directory")->required();
  evaluate->add_option("--pred", evaluate_args.pred_dir, "prediction directory")->required();
  evaluate->add_option("--classes", evaluate_args.classes,
                       "class definition JSON (default: the 19 Cityscapes classes)");
  evaluate->add_option("--out", evaluate_args.out, "write the JSON report here");
  add_common(evaluate, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsageError;
  }

  try {
    if (simulate->parsed()) return foghorn::cli::cmd_simulate(simulate_args, common);
    if (sweep->parsed()) return foghorn::cli::cmd_sweep(sweep_args, common);
    if (train->parsed()) return foghorn::cli::cmd_density_train(train_args, common);
    if (rank->parsed()) return foghorn::cli::cmd_density_rank(rank_args, common);
    if (curriculum->parsed()) return foghorn::cli::cmd_curriculum(curriculum_args, common);
    if (evaluate->parsed()) return foghorn::cli::cmd_evaluate(evaluate_args, common);
  } catch (const std::exception& e) {
    std::cerr << "foghorn: " << e.what() << "\n";
    return kExitDomainError;
  }
  return kExitUsageError;
}
