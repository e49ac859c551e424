#include "commands.hpp"

#include "foghorn/curriculum.hpp"
#include "foghorn/dataset.hpp"
#include "foghorn/density.hpp"
#include "foghorn/evaluation.hpp"
#include "foghorn/fog.hpp"
#include "foghorn/parallel.hpp"
#include "foghorn/png_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace foghorn::cli {

namespace fs = std::filesystem;
using nlohmann::json;

ToolConfig effective_config(const CommonArgs& args) {
  ToolConfig cfg = resolve_tool_config(args.config);
  if (args.parallelism) cfg.parallelism = *args.parallelism;
  if (args.seed) cfg.seed = *args.seed;
  cfg.validate();
  set_parallelism(cfg.parallelism);
  return cfg;
}

int cmd_simulate(const SimulateArgs& args, const CommonArgs& common) {
  ToolConfig cfg = effective_config(common);
  if (args.beta) cfg.fog.beta = *args.beta;
  if (args.allow_haze) cfg.fog.allow_haze = true;
  if (args.light) {
    if (args.light->size() != 3) {
      throw std::invalid_argument("--light expects three channel values in [0,1]");
    }
    cfg.fog.atmospheric_light = {(*args.light)[0], (*args.light)[1], (*args.light)[2]};
  }

  const ImageRGB clear = read_image_png(args.image);
  const DisparityMap d = read_disparity_png(args.disparity);
  const SemanticLabeling labels = read_labels_png(args.labels, args.instances, 255);

  const SimulationResult result = simulate_scene(clear, d, labels, cfg.camera, cfg.fog,
                                                 cfg.completion, cfg.filter, cfg.seed, cfg.grid);
  write_image_png(args.out, result.foggy);
  if (args.transmittance_out) {
    write_transmittance_png(*args.transmittance_out, result.transmittance);
  }
  if (common.json) {
    json j;
    j["out"] = args.out.generic_string();
    j["beta"] = cfg.fog.beta;
    j["atmospheric_light"] = result.atmospheric_light;
    if (args.transmittance_out) j["transmittance"] = args.transmittance_out->generic_string();
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "wrote " << args.out.generic_string() << "\n";
  }
  return 0;
}

int cmd_sweep(const SweepArgs& args, const CommonArgs& common) {
  const ToolConfig cfg = effective_config(common);
  const auto dirs = generate_sweep(args.dataset, args.betas, args.out, cfg);
  if (common.json) {
    json j = json::array();
    for (const auto& dir : dirs) j.push_back(dir.generic_string());
    std::cout << j.dump() << "\n";
  } else {
    for (const auto& dir : dirs) std::cout << dir.generic_string() << "\n";
  }
  return 0;
}

namespace {

// beta_<value> directories produced by the sweep command.
std::vector<std::pair<double, fs::path>> sweep_beta_dirs(const fs::path& root) {
  std::vector<std::pair<double, fs::path>> dirs;
  if (!fs::exists(root)) throw std::runtime_error(root.string() + ": sweep root does not exist");
  for (const auto& entry : fs::directory_iterator(root)) {
    if (!entry.is_directory()) continue;
    const std::string name = entry.path().filename().string();
    if (name.rfind("beta_", 0) != 0) continue;
    dirs.emplace_back(std::stod(name.substr(5)), entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  if (dirs.empty()) {
    throw std::runtime_error(root.string() + ": no beta_<value> sweep directories found");
  }
  return dirs;
}

}  // namespace

int cmd_density_train(const DensityTrainArgs& args, const CommonArgs& common) {
  effective_config(common);
  std::vector<std::pair<FeatureVector, double>> samples;
  for (const auto& [beta, dir] : sweep_beta_dirs(args.sweep_root)) {
    const auto images = list_images(dir / "rgb");
    const std::size_t base = samples.size();
    samples.resize(base + images.size());
    parallel_for(static_cast<std::int64_t>(images.size()),
                 [&, beta = beta](std::int64_t begin, std::int64_t end) {
                   for (std::int64_t i = begin; i < end; ++i) {
                     samples[base + i] = {extract_features(read_image_png(images[i].second)),
                                          beta};
                   }
                 });
  }
  const DensityModel model = fit_density_regressor(samples, args.ridge);
  save_density_model(model, args.out);
  if (common.json) {
    json j;
    j["model"] = args.out.generic_string();
    j["samples"] = samples.size();
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "fitted density model on " << samples.size() << " samples -> "
              << args.out.generic_string() << "\n";
  }
  return 0;
}

int cmd_density_rank(const DensityRankArgs& args, const CommonArgs& common) {
  effective_config(common);
  const DensityModel model = load_density_model(args.model);
  auto images = list_images(args.images);
  if (args.exclude) {
    const auto excluded = load_exclusion_list(*args.exclude);
    std::erase_if(images, [&](const auto& e) { return excluded.count(e.first) > 0; });
  }
  if (images.empty()) throw std::runtime_error("no images to rank");

  std::vector<std::pair<std::string, double>> scores(images.size());
  parallel_for(static_cast<std::int64_t>(images.size()),
               [&](std::int64_t begin, std::int64_t end) {
                 for (std::int64_t i = begin; i < end; ++i) {
                   scores[i] = {images[i].first,
                                estimate_beta(model, read_image_png(images[i].second))};
                 }
               });
  const RankedDataset ranked = rank_scores(std::move(scores));

  std::ofstream out(args.out);
  if (!out) throw std::runtime_error(args.out.string() + ": cannot open for writing");
  for (const auto& r : ranked) {
    json j;
    j["image"] = r.id;
    j["beta_hat"] = r.beta_hat;
    j["percentile"] = r.percentile;
    const std::string line = j.dump();
    out << line << "\n";
    if (common.json) std::cout << line << "\n";
  }
  if (!common.json) {
    std::cout << "ranked " << ranked.size() << " images -> " << args.out.generic_string()
              << "\n";
  }
  return 0;
}

int cmd_curriculum(const CurriculumArgs& args, const CommonArgs& common) {
  const ToolConfig cfg = effective_config(common);
  const CurriculumPlan plan = load_curriculum_plan(args.plan);
  const CurriculumOutputs outputs = build_curriculum(plan, cfg);
  if (common.json) {
    json j;
    j["density_model"] = outputs.density_model.generic_string();
    j["ranking"] = outputs.ranking.generic_string();
    j["stage4_manifest"] = outputs.stage4_manifest.generic_string();
    j["stage7_manifest"] = outputs.stage7_manifest.generic_string();
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "stage-4 manifest: " << outputs.stage4_manifest.generic_string() << "\n"
              << "stage-7 manifest: " << outputs.stage7_manifest.generic_string() << "\n";
  }
  return 0;
}

int cmd_evaluate(const EvaluateArgs& args, const CommonArgs& common) {
  effective_config(common);
  const ClassDefinitions defs =
      args.classes ? load_class_definitions(*args.classes) : ClassDefinitions::cityscapes();

  const auto gt_images = list_images(args.gt_dir);
  if (gt_images.empty()) throw std::runtime_error("no ground-truth label images found");

  std::vector<ConfusionMatrix> partial(gt_images.size(), ConfusionMatrix(defs.class_count()));
  parallel_for(static_cast<std::int64_t>(gt_images.size()),
               [&](std::int64_t begin, std::int64_t end) {
                 for (std::int64_t i = begin; i < end; ++i) {
                   const auto& [id, gt_path] = gt_images[i];
                   const fs::path pred_path = args.pred_dir / (id + ".png");
                   if (!fs::exists(pred_path)) {
                     throw std::runtime_error("image " + id + ": missing prediction " +
                                              pred_path.string());
                   }
                   const SemanticLabeling gt =
                       read_labels_png(gt_path, std::nullopt, defs.class_count());
                   const SemanticLabeling pred =
                       read_labels_png(pred_path, std::nullopt, defs.class_count());
                   accumulate(partial[i], gt, pred);
                 }
               });
  ConfusionMatrix cm(defs.class_count());
  for (const auto& p : partial) cm += p;

  const IouReport all = mean_iou(cm);
  const IouReport frequent = mean_iou(cm, &defs.frequent_ids);

  json j;
  j["mean_iou"] = all.mean_percent;
  j["mean_iou_frequent"] = frequent.mean_percent;
  j["images"] = gt_images.size();
  json per_class = json::array();
  for (int id = 1; id <= defs.class_count(); ++id) {
    json c;
    c["id"] = id;
    c["name"] = defs.name_of(id);
    const auto& iou = all.per_class_percent[id - 1];
    if (iou) {
      c["iou"] = *iou;
    } else {
      c["iou"] = nullptr;
    }
    per_class.push_back(std::move(c));
  }
  j["per_class"] = std::move(per_class);

  if (args.out) {
    std::ofstream out_file(*args.out);
    if (!out_file) throw std::runtime_error(args.out->string() + ": cannot open for writing");
    out_file << j.dump(2) << "\n";
  }
  if (common.json) {
    std::cout << j.dump() << "\n";
  } else {
    std::printf("%-15s %8s\n", "class", "IoU (%)");
    for (int id = 1; id <= defs.class_count(); ++id) {
      const auto& iou = all.per_class_percent[id - 1];
      if (iou) {
        std::printf("%-15s %8.1f\n", defs.name_of(id).c_str(), *iou);
      } else {
        std::printf("%-15s %8s\n", defs.name_of(id).c_str(), "-");
      }
    }
    std::printf("%-15s %8.1f\n", "mean", all.mean_percent);
    std::printf("%-15s %8.1f\n", "mean(frequent)", frequent.mean_percent);
  }
  return 0;
}

}  // namespace foghorn::cli
