#include "foghorn/evaluation.hpp"

#include <json.hpp>

#include <fstream>

namespace foghorn {

const std::string& ClassDefinitions::name_of(int id) const {
  for (const auto& c : classes) {
    if (c.id == id) return c.name;
  }
  throw std::invalid_argument("unknown class id " + std::to_string(id));
}

ClassDefinitions ClassDefinitions::cityscapes() {
  ClassDefinitions defs;
  const char* names[] = {"road",     "sidewalk",     "building",     "wall",   "fence",
                         "pole",     "traffic light", "traffic sign", "vegetation", "terrain",
                         "sky",      "person",       "rider",        "car",    "truck",
                         "bus",      "train",        "motorcycle",   "bicycle"};
  int id = 1;
  for (const char* name : names) defs.classes.push_back({id++, name});
  const char* frequent[] = {"road", "sidewalk", "building", "wall", "fence", "pole",
                            "traffic light", "traffic sign", "vegetation", "sky", "car"};
  for (const char* name : frequent) {
    for (const auto& c : defs.classes) {
      if (c.name == name) defs.frequent_ids.push_back(c.id);
    }
  }
  return defs;
}

ClassDefinitions parse_class_definitions(const std::string& json_text) {
  const nlohmann::json j = nlohmann::json::parse(json_text);
  ClassDefinitions defs;
  int expected = 1;
  for (const auto& item : j.at("classes")) {
    ClassDef def;
    def.id = item.at("id").get<int>();
    def.name = item.at("name").get<std::string>();
    if (def.id != expected++) {
      throw std::runtime_error("class ids must be contiguous starting at 1");
    }
    defs.classes.push_back(std::move(def));
  }
  if (j.contains("frequent")) {
    for (const auto& name : j.at("frequent")) {
      bool found = false;
      for (const auto& c : defs.classes) {
        if (c.name == name.get<std::string>()) {
          defs.frequent_ids.push_back(c.id);
          found = true;
        }
      }
      if (!found) {
        throw std::runtime_error("frequent class '" + name.get<std::string>() +
                                 "' is not a defined class");
      }
    }
  }
  return defs;
}

ClassDefinitions load_class_definitions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path.string() + ": cannot open class definitions");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_class_definitions(text);
}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t t = 0;
  for (const std::uint64_t c : counts) t += c;
  return t;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  if (other.num_classes != num_classes) {
    throw std::invalid_argument("cannot add confusion matrices of different sizes");
  }
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
  return *this;
}

void accumulate(ConfusionMatrix& cm, const SemanticLabeling& gt, const SemanticLabeling& pred) {
  require_same_size(gt, pred, "evaluation");
  const int c = cm.num_classes;
  for (std::size_t i = 0; i < gt.class_ids.size(); ++i) {
    const std::int32_t g = gt.class_ids[i];
    const std::int32_t p = pred.class_ids[i];
    if (p == kVoidLabel) {
      throw std::invalid_argument("prediction contains a void pixel, which is not a class");
    }
    if (g < 0 || g > c || p < 1 || p > c) {
      throw std::invalid_argument("label id out of range: gt=" + std::to_string(g) +
                                  " pred=" + std::to_string(p) + " with " + std::to_string(c) +
                                  " classes");
    }
    if (g == kVoidLabel) continue;
    ++cm.at(g, p);
  }
}

IouReport mean_iou(const ConfusionMatrix& cm, const std::vector<int>* subset) {
  if (cm.num_classes < 1 || cm.total() == 0) {
    throw std::invalid_argument("confusion matrix is empty; nothing to evaluate");
  }
  const int c = cm.num_classes;
  std::vector<char> in_subset(c + 1, subset == nullptr);
  if (subset) {
    for (const int id : *subset) {
      if (id < 1 || id > c) throw std::invalid_argument("subset id out of range");
      in_subset[id] = 1;
    }
  }

  IouReport report;
  report.per_class_percent.assign(c, std::nullopt);
  double sum = 0.0;
  int included = 0;
  for (int id = 1; id <= c; ++id) {
    const std::uint64_t tp = cm.at(id, id);
    std::uint64_t row = 0, col = 0;
    for (int other = 1; other <= c; ++other) {
      row += cm.at(id, other);
      col += cm.at(other, id);
    }
    const std::uint64_t uni = row + col - tp;
    if (uni == 0) continue;  // absent from both gt and prediction
    const double iou = 100.0 * static_cast<double>(tp) / static_cast<double>(uni);
    report.per_class_percent[id - 1] = iou;
    if (in_subset[id]) {
      sum += iou;
      ++included;
    }
  }
  if (included == 0) {
    throw std::invalid_argument("no class present in ground truth or prediction");
  }
  report.mean_percent = sum / included;
  report.included_classes = included;
  return report;
}

}  // namespace foghorn
