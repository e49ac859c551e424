#include "foghorn/color.hpp"

#include "foghorn/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace foghorn {

namespace {

// sRGB <-> XYZ under D65.
constexpr double kRgbToXyz[3][3] = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
};
constexpr double kXyzToRgb[3][3] = {
    {3.2404542, -1.5371385, -0.4985314},
    {-0.9692660, 1.8760108, 0.0415560},
    {0.0556434, -0.2040259, 1.0572252},
};
constexpr double kWhite[3] = {0.95047, 1.00000, 1.08883};

constexpr double kLabDelta = 6.0 / 29.0;

double lab_f(double t) {
  return t > kLabDelta * kLabDelta * kLabDelta ? std::cbrt(t)
                                               : t / (3.0 * kLabDelta * kLabDelta) + 4.0 / 29.0;
}

double lab_f_inv(double t) {
  return t > kLabDelta ? t * t * t : 3.0 * kLabDelta * kLabDelta * (t - 4.0 / 29.0);
}

}  // namespace

double srgb_to_linear(double c) {
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double linear_to_srgb(double c) {
  return c <= 0.0031308 ? c * 12.92 : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

std::array<double, 3> srgb_to_lab(double r, double g, double b) {
  const double lin[3] = {srgb_to_linear(r), srgb_to_linear(g), srgb_to_linear(b)};
  double f[3];
  for (int i = 0; i < 3; ++i) {
    const double v =
        kRgbToXyz[i][0] * lin[0] + kRgbToXyz[i][1] * lin[1] + kRgbToXyz[i][2] * lin[2];
    f[i] = lab_f(v / kWhite[i]);
  }
  const double l = std::clamp(116.0 * f[1] - 16.0, 0.0, 100.0);
  return {l, 500.0 * (f[0] - f[1]), 200.0 * (f[1] - f[2])};
}

std::array<double, 3> lab_to_srgb(double l, double a, double b) {
  const double fy = (l + 16.0) / 116.0;
  const double f[3] = {fy + a / 500.0, fy, fy - b / 200.0};
  double xyz[3];
  for (int i = 0; i < 3; ++i) xyz[i] = kWhite[i] * lab_f_inv(f[i]);
  std::array<double, 3> rgb{};
  for (int i = 0; i < 3; ++i) {
    const double v =
        kXyzToRgb[i][0] * xyz[0] + kXyzToRgb[i][1] * xyz[1] + kXyzToRgb[i][2] * xyz[2];
    rgb[i] = std::clamp(linear_to_srgb(v), 0.0, 1.0);
  }
  return rgb;
}

ImageLab srgb_to_lab(const ImageRGB& img) {
  ImageLab out(img.width, img.height);
  parallel_for(img.pixel_count(), [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      const auto lab =
          srgb_to_lab(img.data[3 * i + 0], img.data[3 * i + 1], img.data[3 * i + 2]);
      out.data[3 * i + 0] = lab[0];
      out.data[3 * i + 1] = lab[1];
      out.data[3 * i + 2] = lab[2];
    }
  });
  return out;
}

ImageRGB lab_to_srgb(const ImageLab& lab) {
  ImageRGB out(lab.width, lab.height);
  parallel_for(lab.pixel_count(), [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      const auto rgb =
          lab_to_srgb(lab.data[3 * i + 0], lab.data[3 * i + 1], lab.data[3 * i + 2]);
      out.data[3 * i + 0] = rgb[0];
      out.data[3 * i + 1] = rgb[1];
      out.data[3 * i + 2] = rgb[2];
    }
  });
  return out;
}

}  // namespace foghorn
