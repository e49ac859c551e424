#include "foghorn/image.hpp"

namespace foghorn {

std::vector<std::int32_t> SemanticLabeling::filter_ids() const {
  if (!has_instances()) return class_ids;
  if (instance_ids.size() != class_ids.size()) {
    throw std::invalid_argument("instance layer size does not match class layer");
  }
  // Distinct id per (class, instance) pair. Instance ids are 16-bit in the
  // on-disk format, so the combination cannot collide.
  std::vector<std::int32_t> ids(class_ids.size());
  for (std::size_t i = 0; i < class_ids.size(); ++i) {
    ids[i] = (class_ids[i] << 16) | (instance_ids[i] & 0xffff);
  }
  return ids;
}

}  // namespace foghorn
