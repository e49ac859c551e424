#pragma once

#include "foghorn/image.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace foghorn {

struct ClassDef {
  int id = 0;
  std::string name;
};

struct ClassDefinitions {
  std::vector<ClassDef> classes;  // ids 1..class_count
  std::vector<int> frequent_ids;

  int class_count() const { return static_cast<int>(classes.size()); }
  const std::string& name_of(int id) const;

  /// The 19 Cityscapes evaluation classes; the frequent subset is road,
  /// sidewalk, building, wall, fence, pole, traffic light, traffic sign,
  /// vegetation, sky, car.
  static ClassDefinitions cityscapes();
};

ClassDefinitions parse_class_definitions(const std::string& json_text);
ClassDefinitions load_class_definitions(const std::filesystem::path& path);

/// C x C counts over non-void ground-truth pixels. Void never enters.
struct ConfusionMatrix {
  int num_classes = 0;
  std::vector<std::uint64_t> counts;  // row = ground truth, col = prediction

  explicit ConfusionMatrix(int classes = 0)
      : num_classes(classes),
        counts(static_cast<std::size_t>(classes) * classes, 0) {}

  std::uint64_t& at(int gt, int pred) {
    return counts[static_cast<std::size_t>(gt - 1) * num_classes + (pred - 1)];
  }
  std::uint64_t at(int gt, int pred) const {
    return counts[static_cast<std::size_t>(gt - 1) * num_classes + (pred - 1)];
  }
  std::uint64_t total() const;
  ConfusionMatrix& operator+=(const ConfusionMatrix& other);
};

/// Adds one image pair. Ground-truth void pixels are skipped; a void pixel
/// in the prediction is an error, as is any id outside 0..num_classes.
void accumulate(ConfusionMatrix& cm, const SemanticLabeling& gt, const SemanticLabeling& pred);

struct IouReport {
  double mean_percent = 0.0;
  int included_classes = 0;
  /// Per class id (1-based index 0 = id 1); nullopt when the class is
  /// absent from both ground truth and prediction.
  std::vector<std::optional<double>> per_class_percent;
};

/// IoU = TP / (TP + FP + FN) per class, in percent. Classes with an empty
/// union are excluded from the mean. `subset` restricts the mean to the
/// given ids (e.g. frequent classes). Throws on an empty matrix.
IouReport mean_iou(const ConfusionMatrix& cm, const std::vector<int>* subset = nullptr);

}  // namespace foghorn
