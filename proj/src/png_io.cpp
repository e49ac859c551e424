#include "foghorn/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>

namespace foghorn {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what) {
  throw std::runtime_error(path.string() + ": " + what);
}

struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;
  FilePtr file;

  explicit PngReader(const std::filesystem::path& path) {
    file.reset(std::fopen(path.string().c_str(), "rb"));
    if (!file) fail(path, "cannot open for reading");
    png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) fail(path, "libpng init failed");
    if (setjmp(png_jmpbuf(png))) fail(path, "corrupt or truncated PNG");
    png_init_io(png, file.get());
  }
  ~PngReader() { png_destroy_read_struct(&png, &info, nullptr); }
  PngReader(const PngReader&) = delete;
  PngReader& operator=(const PngReader&) = delete;
};

struct PngWriter {
  png_structp png = nullptr;
  png_infop info = nullptr;
  FilePtr file;

  explicit PngWriter(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    file.reset(std::fopen(path.string().c_str(), "wb"));
    if (!file) fail(path, "cannot open for writing");
    png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) fail(path, "libpng init failed");
    if (setjmp(png_jmpbuf(png))) fail(path, "PNG write failed");
    png_init_io(png, file.get());
    // Fixed settings so identical pixels yield identical files.
    png_set_compression_level(png, 6);
    png_set_filter(png, 0, PNG_FILTER_SUB);
  }
  ~PngWriter() { png_destroy_write_struct(&png, &info); }
  PngWriter(const PngWriter&) = delete;
  PngWriter& operator=(const PngWriter&) = delete;
};

struct DecodedPng {
  int width = 0;
  int height = 0;
  int bit_depth = 0;
  int channels = 0;
  std::vector<std::uint16_t> samples;  // interleaved, native order
};

DecodedPng decode(const std::filesystem::path& path, bool expand_to_rgb) {
  PngReader r(path);
  if (setjmp(png_jmpbuf(r.png))) fail(path, "corrupt or truncated PNG");
  png_read_info(r.png, r.info);

  const png_byte color_type = png_get_color_type(r.png, r.info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(r.png);
  if (color_type == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(r.png, r.info) < 8) {
    png_set_expand_gray_1_2_4_to_8(r.png);
  }
  if (png_get_valid(r.png, r.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(r.png);
  png_set_strip_alpha(r.png);
  if (expand_to_rgb) png_set_gray_to_rgb(r.png);
#if defined(PNG_READ_SWAP_SUPPORTED)
  if (png_get_bit_depth(r.png, r.info) == 16) png_set_swap(r.png);
#endif
  png_set_interlace_handling(r.png);
  png_read_update_info(r.png, r.info);

  DecodedPng out;
  out.width = static_cast<int>(png_get_image_width(r.png, r.info));
  out.height = static_cast<int>(png_get_image_height(r.png, r.info));
  out.bit_depth = png_get_bit_depth(r.png, r.info);
  out.channels = png_get_channels(r.png, r.info);
  if (out.width <= 0 || out.height <= 0) fail(path, "empty image");

  const std::size_t row_samples = static_cast<std::size_t>(out.width) * out.channels;
  out.samples.resize(row_samples * out.height);
  if (out.bit_depth == 16) {
    std::vector<png_bytep> rows(out.height);
    for (int y = 0; y < out.height; ++y) {
      rows[y] = reinterpret_cast<png_bytep>(out.samples.data() + row_samples * y);
    }
    png_read_image(r.png, rows.data());
  } else {
    std::vector<std::uint8_t> bytes(row_samples * out.height);
    std::vector<png_bytep> rows(out.height);
    for (int y = 0; y < out.height; ++y) rows[y] = bytes.data() + row_samples * y;
    png_read_image(r.png, rows.data());
    for (std::size_t i = 0; i < bytes.size(); ++i) out.samples[i] = bytes[i];
  }
  png_read_end(r.png, nullptr);
  return out;
}

void encode(const std::filesystem::path& path, int width, int height, int bit_depth,
            int channels, const std::vector<std::uint16_t>& samples) {
  PngWriter w(path);
  if (setjmp(png_jmpbuf(w.png))) fail(path, "PNG write failed");
  const int color_type = channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY;
  png_set_IHDR(w.png, w.info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(w.png, w.info);
#if defined(PNG_WRITE_SWAP_SUPPORTED)
  if (bit_depth == 16) png_set_swap(w.png);
#endif
  const std::size_t row_samples = static_cast<std::size_t>(width) * channels;
  if (bit_depth == 16) {
    std::vector<png_bytep> rows(height);
    for (int y = 0; y < height; ++y) {
      rows[y] = reinterpret_cast<png_bytep>(
          const_cast<std::uint16_t*>(samples.data() + row_samples * y));
    }
    png_write_image(w.png, rows.data());
  } else {
    std::vector<std::uint8_t> bytes(row_samples * height);
    for (std::size_t i = 0; i < bytes.size(); ++i) {
      bytes[i] = static_cast<std::uint8_t>(samples[i]);
    }
    std::vector<png_bytep> rows(height);
    for (int y = 0; y < height; ++y) rows[y] = bytes.data() + row_samples * y;
    png_write_image(w.png, rows.data());
  }
  png_write_end(w.png, nullptr);
}

std::uint16_t quantize(double v, int bit_depth) {
  const double scale = bit_depth == 16 ? 65535.0 : 255.0;
  const double q = std::lround(std::clamp(v, 0.0, 1.0) * scale);
  return static_cast<std::uint16_t>(q);
}

}  // namespace

PngInfo read_png_info(const std::filesystem::path& path) {
  PngReader r(path);
  if (setjmp(png_jmpbuf(r.png))) fail(path, "corrupt or truncated PNG");
  png_read_info(r.png, r.info);
  PngInfo info;
  info.width = static_cast<int>(png_get_image_width(r.png, r.info));
  info.height = static_cast<int>(png_get_image_height(r.png, r.info));
  info.bit_depth = png_get_bit_depth(r.png, r.info);
  info.channels = png_get_channels(r.png, r.info);
  return info;
}

ImageRGB read_image_png(const std::filesystem::path& path) {
  const DecodedPng png = decode(path, /*expand_to_rgb=*/true);
  if (png.channels != 3) fail(path, "expected an RGB image");
  const double scale = png.bit_depth == 16 ? 65535.0 : 255.0;
  ImageRGB img(png.width, png.height);
  for (std::size_t i = 0; i < png.samples.size(); ++i) img.data[i] = png.samples[i] / scale;
  return img;
}

void write_image_png(const std::filesystem::path& path, const ImageRGB& img, int bit_depth) {
  if (bit_depth != 8 && bit_depth != 16) {
    throw std::invalid_argument("image bit depth must be 8 or 16");
  }
  std::vector<std::uint16_t> samples(img.data.size());
  for (std::size_t i = 0; i < img.data.size(); ++i) samples[i] = quantize(img.data[i], bit_depth);
  encode(path, img.width, img.height, bit_depth, 3, samples);
}

DisparityMap read_disparity_png(const std::filesystem::path& path) {
  const DecodedPng png = decode(path, /*expand_to_rgb=*/false);
  if (png.channels != 1) fail(path, "disparity must be single-channel");
  if (png.bit_depth != 16) fail(path, "disparity must be 16-bit");
  DisparityMap d(png.width, png.height);
  for (std::size_t i = 0; i < png.samples.size(); ++i) {
    const std::uint16_t raw = png.samples[i];
    d.data[i] = raw == 0 ? missing() : (raw - 1) / 256.0;
  }
  return d;
}

void write_disparity_png(const std::filesystem::path& path, const DisparityMap& d) {
  std::vector<std::uint16_t> samples(d.data.size());
  for (std::size_t i = 0; i < d.data.size(); ++i) {
    const double v = d.data[i];
    if (is_missing(v)) {
      samples[i] = 0;
    } else {
      const double raw = std::lround(v * 256.0) + 1.0;
      samples[i] = static_cast<std::uint16_t>(std::clamp(raw, 1.0, 65535.0));
    }
  }
  encode(path, d.width, d.height, 16, 1, samples);
}

SemanticLabeling read_labels_png(const std::filesystem::path& label_path,
                                 const std::optional<std::filesystem::path>& instance_path,
                                 int class_count) {
  const DecodedPng png = decode(label_path, /*expand_to_rgb=*/false);
  if (png.channels != 1) fail(label_path, "label map must be single-channel");
  SemanticLabeling labels(png.width, png.height, class_count);
  for (std::size_t i = 0; i < png.samples.size(); ++i) {
    labels.class_ids[i] = static_cast<std::int32_t>(png.samples[i]);
  }
  if (instance_path) {
    const DecodedPng inst = decode(*instance_path, /*expand_to_rgb=*/false);
    if (inst.channels != 1) fail(*instance_path, "instance map must be single-channel");
    if (inst.width != png.width || inst.height != png.height) {
      fail(*instance_path, "instance map dimensions do not match label map");
    }
    labels.instance_ids.resize(inst.samples.size());
    for (std::size_t i = 0; i < inst.samples.size(); ++i) {
      labels.instance_ids[i] = static_cast<std::int32_t>(inst.samples[i]);
    }
  }
  return labels;
}

void write_labels_png(const std::filesystem::path& path, const SemanticLabeling& labels) {
  std::vector<std::uint16_t> samples(labels.class_ids.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const std::int32_t id = labels.class_ids[i];
    if (id < 0 || id > 255) {
      throw std::invalid_argument("label id " + std::to_string(id) +
                                  " does not fit the 8-bit label format");
    }
    samples[i] = static_cast<std::uint16_t>(id);
  }
  encode(path, labels.width, labels.height, 8, 1, samples);
}

void write_transmittance_png(const std::filesystem::path& path, const TransmittanceMap& t) {
  std::vector<std::uint16_t> samples(t.data.size());
  for (std::size_t i = 0; i < t.data.size(); ++i) {
    if (is_missing(t.data[i])) {
      throw std::invalid_argument("cannot write a transmittance map with missing pixels");
    }
    samples[i] = quantize(t.data[i], 16);
  }
  encode(path, t.width, t.height, 16, 1, samples);
}

TransmittanceMap read_transmittance_png(const std::filesystem::path& path) {
  const DecodedPng png = decode(path, /*expand_to_rgb=*/false);
  if (png.channels != 1 || png.bit_depth != 16) fail(path, "expected 16-bit single-channel");
  TransmittanceMap t(png.width, png.height);
  for (std::size_t i = 0; i < png.samples.size(); ++i) t.data[i] = png.samples[i] / 65535.0;
  return t;
}

}  // namespace foghorn
