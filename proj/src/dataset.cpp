#include "foghorn/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace foghorn {

namespace fs = std::filesystem;

namespace {

std::vector<std::pair<std::string, fs::path>> collect_pngs(const fs::path& root) {
  std::vector<std::pair<std::string, fs::path>> out;
  if (!fs::exists(root)) return out;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".png") continue;
    fs::path rel = fs::relative(entry.path(), root);
    rel.replace_extension();
    out.emplace_back(rel.generic_string(), entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<DatasetItem> scan_dataset(const fs::path& root, bool require_annotations) {
  const fs::path rgb_root = root / "rgb";
  if (!fs::exists(rgb_root)) {
    throw std::runtime_error(root.string() + ": dataset root has no rgb/ directory");
  }
  std::vector<DatasetItem> items;
  for (auto& [id, rgb_path] : collect_pngs(rgb_root)) {
    DatasetItem item;
    item.id = id;
    item.rgb = rgb_path;
    item.disparity = root / "disparity" / (id + ".png");
    item.labels = root / "labels" / (id + ".png");
    const fs::path instances = root / "instances" / (id + ".png");
    if (fs::exists(instances)) item.instances = instances;
    if (require_annotations) {
      if (!fs::exists(item.disparity)) {
        throw std::runtime_error("image " + id + ": missing disparity file " +
                                 item.disparity.string());
      }
      if (!fs::exists(item.labels)) {
        throw std::runtime_error("image " + id + ": missing label file " + item.labels.string());
      }
    }
    items.push_back(std::move(item));
  }
  return items;
}

std::vector<std::pair<std::string, fs::path>> list_images(const fs::path& root) {
  if (!fs::exists(root)) {
    throw std::runtime_error(root.string() + ": image directory does not exist");
  }
  return collect_pngs(root);
}

std::unordered_set<std::string> load_exclusion_list(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path.string() + ": cannot open exclusion list");
  std::unordered_set<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    // trim whitespace
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    const auto end = line.find_last_not_of(" \t\r");
    line = line.substr(begin, end - begin + 1);
    if (line.empty() || line[0] == '#') continue;
    ids.insert(line);
  }
  return ids;
}

}  // namespace foghorn
