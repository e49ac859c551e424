#pragma once

#include "foghorn/image.hpp"

#include <filesystem>
#include <optional>

namespace foghorn {

struct PngInfo {
  int width = 0;
  int height = 0;
  int bit_depth = 0;
  int channels = 0;
};

PngInfo read_png_info(const std::filesystem::path& path);

/// 8- or 16-bit RGB (gray and paletted inputs are expanded). Values scaled
/// to [0,1] by the full sample range.
ImageRGB read_image_png(const std::filesystem::path& path);
void write_image_png(const std::filesystem::path& path, const ImageRGB& img, int bit_depth = 8);

/// 16-bit single-channel disparity, Cityscapes encoding:
/// raw 0 = missing, disparity = (raw - 1) / 256 pixels otherwise.
DisparityMap read_disparity_png(const std::filesystem::path& path);
void write_disparity_png(const std::filesystem::path& path, const DisparityMap& d);

/// 8-bit single-channel class ids, optional 16-bit instance layer.
SemanticLabeling read_labels_png(const std::filesystem::path& label_path,
                                 const std::optional<std::filesystem::path>& instance_path,
                                 int class_count);
void write_labels_png(const std::filesystem::path& path, const SemanticLabeling& labels);

/// 16-bit single-channel, t scaled by 65535.
void write_transmittance_png(const std::filesystem::path& path, const TransmittanceMap& t);
TransmittanceMap read_transmittance_png(const std::filesystem::path& path);

}  // namespace foghorn
