#pragma once

#include "foghorn/image.hpp"

#include <array>

namespace foghorn {

/// sRGB transfer function (IEC 61966-2-1), scalar form.
double srgb_to_linear(double c);
double linear_to_srgb(double c);

/// sRGB -> CIELAB under the D65 white point. L* clamped to [0,100].
ImageLab srgb_to_lab(const ImageRGB& img);

/// Inverse of srgb_to_lab; output clamped to [0,1].
ImageRGB lab_to_srgb(const ImageLab& lab);

std::array<double, 3> srgb_to_lab(double r, double g, double b);
std::array<double, 3> lab_to_srgb(double l, double a, double b);

/// Rec. 709 relative luminance of a linear-RGB triple.
inline double linear_luminance(double r, double g, double b) {
  return 0.2126 * r + 0.7152 * g + 0.0722 * b;
}

}  // namespace foghorn
