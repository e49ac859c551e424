#pragma once

#include "foghorn/config.hpp"
#include "foghorn/density.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace foghorn {

enum class EntrySource { SynthLight, SynthDense, RealLight };

std::string to_string(EntrySource s);
EntrySource entry_source_from_string(const std::string& s);

struct ManifestEntry {
  std::string image;
  std::string label;
  EntrySource source = EntrySource::SynthLight;
  double weight = 1.0;
};

/// Sidecar metadata: l labeled synthetic entries, u real entries (unique
/// source images), mixing weight w, and lambda = (u/l) * w.
struct ManifestMeta {
  std::int64_t l = 0;
  std::int64_t u = 0;
  double w = 0.0;
  double lambda = 0.0;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  ManifestMeta meta;
};

using LabeledImage = std::pair<std::string, std::string>;  // image path, label path

/// Interleaves synthetic and real entries so every prefix keeps the
/// synthetic:real count ratio within max(1, w) of 1:w (greedy
/// lowest-accumulated-error). Each synthetic image appears exactly once;
/// real images cycle or truncate as needed to sustain the ratio.
DatasetManifest build_mixed_manifest(const std::vector<LabeledImage>& synth_dense,
                                     const std::vector<LabeledImage>& real_light, double w);

/// Single-source manifest (curriculum stage 4: light synthetic only).
DatasetManifest build_single_source_manifest(const std::vector<LabeledImage>& entries,
                                             EntrySource source);

/// JSON-lines entries plus a <stem>.meta.json sidecar.
void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& jsonl_path);
DatasetManifest read_manifest(const std::filesystem::path& jsonl_path);

/// The n lowest-density image ids, rank order preserved.
std::vector<std::string> select_light_subset(const RankedDataset& ranked, std::size_t n);
/// All ids with beta_hat <= threshold.
std::vector<std::string> select_light_subset_by_threshold(const RankedDataset& ranked,
                                                          double beta_hat_threshold);

/// Pairs each image with <label_dir>/<id>.png, validating existence,
/// matching dimensions, and that label ids fall in {void} + 1..class_count.
std::vector<LabeledImage> ingest_noisy_labels(
    const std::vector<std::pair<std::string, std::filesystem::path>>& images,
    const std::filesystem::path& label_dir, int class_count);

/// Renders one foggy copy of the dataset per beta under
/// out_root/beta_<value>/rgb, mirroring the input tree. Unchanged inputs
/// are skipped on re-runs via a content-hash cache in out_root.
std::vector<std::filesystem::path> generate_sweep(const std::filesystem::path& clear_root,
                                                  const std::vector<double>& betas,
                                                  const std::filesystem::path& out_root,
                                                  const ToolConfig& cfg);

struct CurriculumPlan {
  std::filesystem::path clear_dataset;
  std::filesystem::path real_dataset;
  std::filesystem::path noisy_label_dir;
  std::filesystem::path output_dir;
  std::filesystem::path exclusion_list;  // optional; empty = none
  double light_beta = 0.005;
  double dense_beta = 0.01;
  std::vector<double> density_betas{0.0, 0.005, 0.01, 0.02};
  double density_ridge = 1e-8;
  std::size_t light_count = 0;          // used when > 0
  double light_threshold = -1.0;        // used when light_count == 0
  double w = 1.0 / 3.0;
  int class_count = 19;

  void validate() const;
};

CurriculumPlan parse_curriculum_plan(const std::string& json_text);
CurriculumPlan load_curriculum_plan(const std::filesystem::path& path);

struct CurriculumOutputs {
  std::filesystem::path density_model;
  std::filesystem::path ranking;
  std::filesystem::path stage4_manifest;
  std::filesystem::path stage7_manifest;
};

/// Runs the full curriculum: density sweep + regressor, real-image
/// ranking, light-subset selection, noisy-label ingestion, light and dense
/// rendering, and the stage-4 / stage-7 manifests. Stages are cached by
/// content hash, so re-runs with unchanged inputs are cheap and emit
/// byte-identical manifests. Errors name the failing stage.
CurriculumOutputs build_curriculum(const CurriculumPlan& plan, const ToolConfig& cfg);

}  // namespace foghorn
