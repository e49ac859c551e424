#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

namespace foghorn {

/// One annotated clear-weather scene. A dataset root holds parallel trees
///   rgb/<id>.png  disparity/<id>.png  labels/<id>.png  [instances/<id>.png]
/// where <id> is any relative path.
struct DatasetItem {
  std::string id;
  std::filesystem::path rgb;
  std::filesystem::path disparity;
  std::filesystem::path labels;
  std::optional<std::filesystem::path> instances;
};

/// Recursive, lexicographically sorted by id. With require_annotations,
/// a missing disparity or label file for any image is an error naming it.
std::vector<DatasetItem> scan_dataset(const std::filesystem::path& root,
                                      bool require_annotations);

/// All PNGs under root, sorted by relative path. Returned ids are the
/// relative paths without the extension.
std::vector<std::pair<std::string, std::filesystem::path>> list_images(
    const std::filesystem::path& root);

/// One image id per line; blank lines and lines starting with '#' skipped.
std::unordered_set<std::string> load_exclusion_list(const std::filesystem::path& path);

}  // namespace foghorn
