#include "foghorn/curriculum.hpp"

#include "foghorn/dataset.hpp"
#include "foghorn/fog.hpp"
#include "foghorn/parallel.hpp"
#include "foghorn/png_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace foghorn {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(EntrySource s) {
  switch (s) {
    case EntrySource::SynthLight: return "SYNTH_LIGHT";
    case EntrySource::SynthDense: return "SYNTH_DENSE";
    case EntrySource::RealLight: return "REAL_LIGHT";
  }
  throw std::invalid_argument("unknown entry source");
}

EntrySource entry_source_from_string(const std::string& s) {
  if (s == "SYNTH_LIGHT") return EntrySource::SynthLight;
  if (s == "SYNTH_DENSE") return EntrySource::SynthDense;
  if (s == "REAL_LIGHT") return EntrySource::RealLight;
  throw std::invalid_argument("unknown entry source '" + s + "'");
}

DatasetManifest build_single_source_manifest(const std::vector<LabeledImage>& entries,
                                             EntrySource source) {
  if (entries.empty()) throw std::invalid_argument("manifest needs at least one entry");
  DatasetManifest m;
  for (const auto& [image, label] : entries) {
    m.entries.push_back({image, label, source, 1.0});
  }
  if (source == EntrySource::RealLight) {
    m.meta.u = static_cast<std::int64_t>(entries.size());
  } else {
    m.meta.l = static_cast<std::int64_t>(entries.size());
  }
  return m;
}

DatasetManifest build_mixed_manifest(const std::vector<LabeledImage>& synth_dense,
                                     const std::vector<LabeledImage>& real_light, double w) {
  if (w < 0) throw std::invalid_argument("mixing weight w must be non-negative");
  if (synth_dense.empty() || real_light.empty()) {
    throw std::invalid_argument("mixed manifest needs non-empty synthetic and real sets");
  }

  const std::int64_t l = static_cast<std::int64_t>(synth_dense.size());
  const std::int64_t u = static_cast<std::int64_t>(real_light.size());
  const std::int64_t target_real = static_cast<std::int64_t>(std::llround(w * l));

  DatasetManifest m;
  m.meta.l = l;
  m.meta.u = u;
  m.meta.w = w;
  m.meta.lambda = (static_cast<double>(u) / static_cast<double>(l)) * w;

  // Greedy lowest-accumulated-error walk along the ray r = w*s: every
  // prefix stays within max(1, w) of the 1:w proportion. Real entries
  // cycle (or truncate) to sustain the ratio over the whole stream.
  std::int64_t s = 0, r = 0;
  while (s < l || r < target_real) {
    const bool can_s = s < l;
    const bool can_r = r < target_real;
    bool emit_synth;
    if (can_s && can_r) {
      const double err_s = std::fabs(static_cast<double>(r) - w * (s + 1));
      const double err_r = std::fabs(static_cast<double>(r + 1) - w * s);
      emit_synth = err_s <= err_r;
    } else {
      emit_synth = can_s;
    }
    if (emit_synth) {
      const auto& [image, label] = synth_dense[s++];
      m.entries.push_back({image, label, EntrySource::SynthDense, 1.0});
    } else {
      const auto& [image, label] = real_light[r++ % u];
      m.entries.push_back({image, label, EntrySource::RealLight, 1.0});
    }
  }
  return m;
}

void write_manifest(const DatasetManifest& manifest, const fs::path& jsonl_path) {
  if (jsonl_path.has_parent_path()) fs::create_directories(jsonl_path.parent_path());
  std::ofstream out(jsonl_path);
  if (!out) throw std::runtime_error(jsonl_path.string() + ": cannot open for writing");
  for (const auto& e : manifest.entries) {
    json j;
    j["image"] = e.image;
    j["label"] = e.label;
    j["source"] = to_string(e.source);
    j["weight"] = e.weight;
    out << j.dump() << "\n";
  }
  json meta;
  meta["l"] = manifest.meta.l;
  meta["u"] = manifest.meta.u;
  meta["w"] = manifest.meta.w;
  meta["lambda"] = manifest.meta.lambda;
  fs::path meta_path = jsonl_path;
  meta_path.replace_extension(".meta.json");
  std::ofstream meta_out(meta_path);
  if (!meta_out) throw std::runtime_error(meta_path.string() + ": cannot open for writing");
  meta_out << meta.dump(2) << "\n";
}

DatasetManifest read_manifest(const fs::path& jsonl_path) {
  std::ifstream in(jsonl_path);
  if (!in) throw std::runtime_error(jsonl_path.string() + ": cannot open manifest");
  DatasetManifest m;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    ManifestEntry e;
    e.image = j.at("image").get<std::string>();
    e.label = j.at("label").get<std::string>();
    e.source = entry_source_from_string(j.at("source").get<std::string>());
    e.weight = j.at("weight").get<double>();
    m.entries.push_back(std::move(e));
  }
  fs::path meta_path = jsonl_path;
  meta_path.replace_extension(".meta.json");
  std::ifstream meta_in(meta_path);
  if (meta_in) {
    json meta;
    meta_in >> meta;
    m.meta.l = meta.value("l", std::int64_t{0});
    m.meta.u = meta.value("u", std::int64_t{0});
    m.meta.w = meta.value("w", 0.0);
    m.meta.lambda = meta.value("lambda", 0.0);
  }
  return m;
}

std::vector<std::string> select_light_subset(const RankedDataset& ranked, std::size_t n) {
  if (n > ranked.size()) {
    throw std::invalid_argument("light subset size " + std::to_string(n) +
                                " exceeds dataset size " + std::to_string(ranked.size()));
  }
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ids.push_back(ranked[i].id);
  return ids;
}

std::vector<std::string> select_light_subset_by_threshold(const RankedDataset& ranked,
                                                          double beta_hat_threshold) {
  std::vector<std::string> ids;
  for (const auto& r : ranked) {
    if (r.beta_hat <= beta_hat_threshold) ids.push_back(r.id);
  }
  return ids;
}

std::vector<LabeledImage> ingest_noisy_labels(
    const std::vector<std::pair<std::string, fs::path>>& images, const fs::path& label_dir,
    int class_count) {
  if (!fs::exists(label_dir)) {
    throw std::runtime_error("noisy label directory does not exist: " + label_dir.string());
  }
  std::vector<LabeledImage> pairs;
  pairs.reserve(images.size());
  for (const auto& [id, image_path] : images) {
    const fs::path label_path = label_dir / (id + ".png");
    if (!fs::exists(label_path)) {
      throw std::runtime_error("image " + id + ": missing noisy label file " +
                               label_path.string());
    }
    const PngInfo image_info = read_png_info(image_path);
    const SemanticLabeling labels = read_labels_png(label_path, std::nullopt, class_count);
    if (labels.width != image_info.width || labels.height != image_info.height) {
      throw std::runtime_error("image " + id + ": label dimensions " +
                               std::to_string(labels.width) + "x" +
                               std::to_string(labels.height) + " do not match image " +
                               std::to_string(image_info.width) + "x" +
                               std::to_string(image_info.height));
    }
    for (const std::int32_t v : labels.class_ids) {
      if (v != kVoidLabel && (v < 1 || v > class_count)) {
        throw std::runtime_error("image " + id + ": label id " + std::to_string(v) +
                                 " outside 1.." + std::to_string(class_count));
      }
    }
    pairs.emplace_back(image_path.generic_string(), label_path.generic_string());
  }
  return pairs;
}

namespace {

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t h) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t hash_file(const fs::path& path, std::uint64_t h) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path.string() + ": cannot open for hashing");
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    h = fnv1a(buf, static_cast<std::size_t>(in.gcount()), h);
  }
  return h;
}

std::string format_beta(double beta) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", beta);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string simulation_param_key(const ToolConfig& cfg, double beta) {
  std::ostringstream os;
  os.precision(17);
  os << beta << '|' << cfg.camera.baseline_m << ',' << cfg.camera.focal_length_px << '|'
     << cfg.completion.superpixel_count << ',' << cfg.completion.compactness << ','
     << cfg.completion.ransac_iters << ',' << cfg.completion.inlier_tol_m << ','
     << cfg.completion.min_valid_fraction << '|' << cfg.filter.mu << ',' << cfg.filter.sigma_s
     << ',' << cfg.filter.sigma_c << ',' << cfg.filter.window_radius << '|' << cfg.seed;
  if (cfg.fog.atmospheric_light) {
    os << "|L=" << (*cfg.fog.atmospheric_light)[0] << ',' << (*cfg.fog.atmospheric_light)[1]
       << ',' << (*cfg.fog.atmospheric_light)[2];
  }
  return os.str();
}

class SweepCache {
 public:
  explicit SweepCache(const fs::path& out_root) : path_(out_root / "sweep_cache.json") {
    std::ifstream in(path_);
    if (in) {
      json j;
      in >> j;
      for (const auto& [key, value] : j.items()) entries_[key] = value.get<std::string>();
    }
  }

  bool hit(const std::string& key, const std::string& digest) const {
    const auto it = entries_.find(key);
    return it != entries_.end() && it->second == digest;
  }

  void store(const std::string& key, const std::string& digest) { entries_[key] = digest; }

  void save() const {
    json j(entries_);
    fs::create_directories(path_.parent_path());
    std::ofstream out(path_);
    if (!out) throw std::runtime_error(path_.string() + ": cannot write sweep cache");
    out << j.dump(2) << "\n";
  }

 private:
  fs::path path_;
  std::map<std::string, std::string> entries_;  // ordered: deterministic file
};

}  // namespace

std::vector<fs::path> generate_sweep(const fs::path& clear_root,
                                     const std::vector<double>& betas, const fs::path& out_root,
                                     const ToolConfig& cfg) {
  if (betas.empty()) throw std::invalid_argument("sweep needs at least one beta");
  for (const double beta : betas) validate_beta(beta, cfg.fog.allow_haze);

  const std::vector<DatasetItem> items = scan_dataset(clear_root, /*require_annotations=*/true);
  if (items.empty()) throw std::runtime_error(clear_root.string() + ": dataset has no images");

  SweepCache cache(out_root);
  std::vector<fs::path> dataset_dirs;

  for (const double beta : betas) {
    const fs::path beta_dir = out_root / ("beta_" + format_beta(beta));
    const std::string param_key = simulation_param_key(cfg, beta);

    struct Job {
      const DatasetItem* item;
      fs::path out_png;
      std::string cache_key;
      std::string digest;
    };
    std::vector<Job> jobs;
    for (const DatasetItem& item : items) {
      Job job;
      job.item = &item;
      job.out_png = beta_dir / "rgb" / (item.id + ".png");
      job.cache_key = (fs::path("beta_" + format_beta(beta)) / item.id).generic_string();
      std::uint64_t h = fnv1a(param_key.data(), param_key.size(), 1469598103934665603ull);
      h = hash_file(item.rgb, h);
      h = hash_file(item.disparity, h);
      h = hash_file(item.labels, h);
      if (item.instances) h = hash_file(*item.instances, h);
      job.digest = hex64(h);
      jobs.push_back(std::move(job));
    }

    parallel_for(static_cast<std::int64_t>(jobs.size()),
                 [&](std::int64_t begin, std::int64_t end) {
                   for (std::int64_t i = begin; i < end; ++i) {
                     const Job& job = jobs[i];
                     if (cache.hit(job.cache_key, job.digest) && fs::exists(job.out_png)) {
                       continue;
                     }
                     const ImageRGB clear = read_image_png(job.item->rgb);
                     const DisparityMap d = read_disparity_png(job.item->disparity);
                     const SemanticLabeling h = read_labels_png(
                         job.item->labels, job.item->instances, /*class_count=*/255);
                     FogConfig fog = cfg.fog;
                     fog.beta = beta;
                     const SimulationResult result = simulate_scene(
                         clear, d, h, cfg.camera, fog, cfg.completion, cfg.filter, cfg.seed,
                         cfg.grid);
                     write_image_png(job.out_png, result.foggy);
                   }
                 });
    for (const Job& job : jobs) cache.store(job.cache_key, job.digest);
    dataset_dirs.push_back(beta_dir);
  }
  cache.save();
  return dataset_dirs;
}

void CurriculumPlan::validate() const {
  if (clear_dataset.empty() || real_dataset.empty() || output_dir.empty()) {
    throw std::invalid_argument("plan must set clear_dataset, real_dataset and output_dir");
  }
  if (!(light_beta < dense_beta)) {
    throw std::invalid_argument(
        "curriculum must move from light to dense fog: light beta " +
        std::to_string(light_beta) + " must be below dense beta " + std::to_string(dense_beta));
  }
  validate_beta(light_beta, false);
  validate_beta(dense_beta, false);
  if (density_betas.empty()) throw std::invalid_argument("density sweep needs at least one beta");
  for (const double b : density_betas) validate_beta(b, false);
  if (w < 0) throw std::invalid_argument("mixing weight w must be non-negative");
  if (density_ridge < 0) throw std::invalid_argument("density ridge must be non-negative");
  if (light_count == 0 && light_threshold < 0) {
    throw std::invalid_argument("plan must set light_count or light_threshold");
  }
  if (class_count < 1) throw std::invalid_argument("class count must be positive");
}

CurriculumPlan parse_curriculum_plan(const std::string& json_text) {
  const json j = json::parse(json_text);
  CurriculumPlan plan;
  plan.clear_dataset = j.value("clear_dataset", std::string{});
  plan.real_dataset = j.value("real_dataset", std::string{});
  plan.noisy_label_dir = j.value("noisy_label_dir", std::string{});
  plan.output_dir = j.value("output_dir", std::string{});
  plan.exclusion_list = j.value("exclusion_list", std::string{});
  plan.light_beta = j.value("light_beta", plan.light_beta);
  plan.dense_beta = j.value("dense_beta", plan.dense_beta);
  if (j.contains("density_betas")) {
    plan.density_betas = j.at("density_betas").get<std::vector<double>>();
  }
  plan.density_ridge = j.value("density_ridge", plan.density_ridge);
  plan.light_count = j.value("light_count", plan.light_count);
  plan.light_threshold = j.value("light_threshold", plan.light_threshold);
  plan.w = j.value("w", plan.w);
  plan.class_count = j.value("class_count", plan.class_count);
  plan.validate();
  return plan;
}

CurriculumPlan load_curriculum_plan(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path.string() + ": cannot open curriculum plan");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return parse_curriculum_plan(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

namespace {

template <class Fn>
auto run_stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("curriculum stage '") + name + "': " + e.what());
  }
}

}  // namespace

CurriculumOutputs build_curriculum(const CurriculumPlan& plan, const ToolConfig& cfg) {
  plan.validate();
  const fs::path out = plan.output_dir;
  fs::create_directories(out);

  std::unordered_set<std::string> excluded;
  if (!plan.exclusion_list.empty()) {
    excluded = load_exclusion_list(plan.exclusion_list);
  }

  // 1. beta-controlled synthetic sweep for the density estimator
  const fs::path sweep_root = out / "sweep";
  run_stage("density-sweep", [&] {
    return generate_sweep(plan.clear_dataset, plan.density_betas, sweep_root, cfg);
  });

  // 2. fit the density regressor on the sweep
  CurriculumOutputs outputs;
  outputs.density_model = out / "density_model.json";
  const DensityModel model = run_stage("density-train", [&] {
    std::vector<std::pair<FeatureVector, double>> samples;
    for (const double beta : plan.density_betas) {
      const fs::path rgb_dir = sweep_root / ("beta_" + format_beta(beta)) / "rgb";
      const auto images = list_images(rgb_dir);
      const std::size_t base = samples.size();
      samples.resize(base + images.size());
      parallel_for(static_cast<std::int64_t>(images.size()),
                   [&](std::int64_t begin, std::int64_t end) {
                     for (std::int64_t i = begin; i < end; ++i) {
                       samples[base + i] = {extract_features(read_image_png(images[i].second)),
                                            beta};
                     }
                   });
    }
    DensityModel m = fit_density_regressor(samples, plan.density_ridge);
    save_density_model(m, outputs.density_model);
    return m;
  });

  // 3. rank the real foggy images by estimated density
  outputs.ranking = out / "ranking.jsonl";
  const RankedDataset ranked = run_stage("rank-real", [&] {
    auto images = list_images(plan.real_dataset);
    std::erase_if(images, [&](const auto& e) { return excluded.count(e.first) > 0; });
    if (images.empty()) {
      throw std::runtime_error("real dataset is empty after applying the exclusion list");
    }
    std::vector<std::pair<std::string, double>> scores(images.size());
    parallel_for(static_cast<std::int64_t>(images.size()),
                 [&](std::int64_t begin, std::int64_t end) {
                   for (std::int64_t i = begin; i < end; ++i) {
                     scores[i] = {images[i].first,
                                  estimate_beta(model, read_image_png(images[i].second))};
                   }
                 });
    RankedDataset r = rank_scores(std::move(scores));
    std::ofstream rank_out(outputs.ranking);
    if (!rank_out) throw std::runtime_error(outputs.ranking.string() + ": cannot write ranking");
    for (const auto& entry : r) {
      json jr;
      jr["image"] = entry.id;
      jr["beta_hat"] = entry.beta_hat;
      jr["percentile"] = entry.percentile;
      rank_out << jr.dump() << "\n";
    }
    return r;
  });

  // 4. light-real subset
  const std::vector<std::string> light_ids = run_stage("select-light", [&] {
    return plan.light_count > 0 ? select_light_subset(ranked, plan.light_count)
                                : select_light_subset_by_threshold(ranked, plan.light_threshold);
  });

  // 5. light synthetic rendering + stage-4 manifest (cache makes this a
  //    no-op when light_beta was part of the density sweep)
  const std::vector<DatasetItem> clear_items = [&] {
    auto items = scan_dataset(plan.clear_dataset, true);
    std::erase_if(items, [&](const DatasetItem& it) { return excluded.count(it.id) > 0; });
    return items;
  }();
  outputs.stage4_manifest = out / "cmada_stage4.jsonl";
  run_stage("render-light", [&] {
    generate_sweep(plan.clear_dataset, {plan.light_beta}, sweep_root, cfg);
    std::vector<LabeledImage> entries;
    const fs::path rgb_dir = sweep_root / ("beta_" + format_beta(plan.light_beta)) / "rgb";
    for (const DatasetItem& item : clear_items) {
      entries.emplace_back((rgb_dir / (item.id + ".png")).generic_string(),
                           item.labels.generic_string());
    }
    write_manifest(build_single_source_manifest(entries, EntrySource::SynthLight),
                   outputs.stage4_manifest);
    return 0;
  });

  // 6. noisy labels for the light-real subset
  const std::vector<LabeledImage> real_pairs = run_stage("ingest-noisy-labels", [&] {
    std::vector<std::pair<std::string, fs::path>> targets;
    for (const std::string& id : light_ids) {
      targets.emplace_back(id, plan.real_dataset / (id + ".png"));
    }
    return ingest_noisy_labels(targets, plan.noisy_label_dir, plan.class_count);
  });

  // 7. dense rendering + mixed stage-7 manifest
  outputs.stage7_manifest = out / "cmada_stage7.jsonl";
  run_stage("render-dense", [&] {
    generate_sweep(plan.clear_dataset, {plan.dense_beta}, sweep_root, cfg);
    return 0;
  });
  run_stage("mixed-manifest", [&] {
    std::vector<LabeledImage> synth_entries;
    const fs::path rgb_dir = sweep_root / ("beta_" + format_beta(plan.dense_beta)) / "rgb";
    for (const DatasetItem& item : clear_items) {
      synth_entries.emplace_back((rgb_dir / (item.id + ".png")).generic_string(),
                                 item.labels.generic_string());
    }
    write_manifest(build_mixed_manifest(synth_entries, real_pairs, plan.w),
                   outputs.stage7_manifest);
    return 0;
  });

  return outputs;
}

}  // namespace foghorn
