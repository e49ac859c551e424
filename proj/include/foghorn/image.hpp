#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace foghorn {

// Sentinel for absent measurements in disparity/depth/transmittance maps.
// NaN can never collide with a valid value, so completion code cannot
// mistake a hole for data.
inline double missing() { return std::numeric_limits<double>::quiet_NaN(); }
inline bool is_missing(double v) { return std::isnan(v); }

// Label id reserved for pixels outside the class taxonomy. Valid class ids
// are 1..class_count.
inline constexpr std::int32_t kVoidLabel = 0;

namespace detail {

struct ScalarRaster {
  int width = 0;
  int height = 0;
  std::vector<double> data;

  ScalarRaster() = default;
  ScalarRaster(int w, int h, double fill = 0.0)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {
    if (w <= 0 || h <= 0) throw std::invalid_argument("raster dimensions must be positive");
  }

  double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
};

struct TriRaster {
  int width = 0;
  int height = 0;
  std::vector<double> data;  // interleaved, 3 channels per pixel

  TriRaster() = default;
  TriRaster(int w, int h, double fill = 0.0)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, fill) {
    if (w <= 0 || h <= 0) throw std::invalid_argument("raster dimensions must be positive");
  }

  double& at(int x, int y, int c) {
    return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }
  double at(int x, int y, int c) const {
    return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
};

}  // namespace detail

/// Clear or foggy scene image, interleaved sRGB channels in [0,1].
struct ImageRGB : detail::TriRaster {
  using detail::TriRaster::TriRaster;
  static ImageRGB constant(int w, int h, double r, double g, double b) {
    ImageRGB img(w, h);
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
      img.data[3 * i + 0] = r;
      img.data[3 * i + 1] = g;
      img.data[3 * i + 2] = b;
    }
    return img;
  }
};

/// CIELAB counterpart of an sRGB image (D65 white). L* in [0,100].
struct ImageLab : detail::TriRaster {
  using detail::TriRaster::TriRaster;
};

/// Stereo disparity in pixels; holes carry the missing() sentinel.
struct DisparityMap : detail::ScalarRaster {
  using detail::ScalarRaster::ScalarRaster;
};

/// Metric distance from the camera in meters; holes carry missing().
struct DepthMap : detail::ScalarRaster {
  using detail::ScalarRaster::ScalarRaster;
};

/// Per-pixel transmittance t in (0,1]. Pre-completion maps may carry
/// missing(); completed maps never do.
struct TransmittanceMap : detail::ScalarRaster {
  using detail::ScalarRaster::ScalarRaster;
};

/// Per-pixel semantic class ids in 1..class_count (kVoidLabel allowed for
/// unannotated pixels), plus an optional instance layer that subdivides
/// class regions into distinct objects.
struct SemanticLabeling {
  int width = 0;
  int height = 0;
  int class_count = 0;
  std::vector<std::int32_t> class_ids;
  std::vector<std::int32_t> instance_ids;  // empty when no instance layer

  SemanticLabeling() = default;
  SemanticLabeling(int w, int h, int classes, std::int32_t fill = kVoidLabel)
      : width(w), height(h), class_count(classes),
        class_ids(static_cast<std::size_t>(w) * h, fill) {
    if (w <= 0 || h <= 0) throw std::invalid_argument("labeling dimensions must be positive");
  }

  bool has_instances() const { return !instance_ids.empty(); }
  std::int32_t& at(int x, int y) { return class_ids[static_cast<std::size_t>(y) * width + x]; }
  std::int32_t at(int x, int y) const {
    return class_ids[static_cast<std::size_t>(y) * width + x];
  }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }

  /// Opaque per-pixel ids for reference-based filtering: one id per class,
  /// or one per (class, instance) pair when an instance layer is present,
  /// so adjacent objects of the same class stay separable.
  std::vector<std::int32_t> filter_ids() const;
};

template <class A, class B>
bool same_size(const A& a, const B& b) {
  return a.width == b.width && a.height == b.height;
}

template <class A, class B>
void require_same_size(const A& a, const B& b, const std::string& what) {
  if (!same_size(a, b)) {
    throw std::invalid_argument(what + ": dimension mismatch (" + std::to_string(a.width) + "x" +
                                std::to_string(a.height) + " vs " + std::to_string(b.width) + "x" +
                                std::to_string(b.height) + ")");
  }
}

}  // namespace foghorn
