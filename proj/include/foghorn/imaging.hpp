#pragma once

#include "foghorn/image.hpp"

namespace foghorn {

/// Stereo rig geometry. Baseline in meters, focal length in pixels.
struct CameraModel {
  double baseline_m = 0.209313;      // Cityscapes rig
  double focal_length_px = 2262.52;  //

  void validate() const {
    if (!(baseline_m > 0.0) || !(focal_length_px > 0.0)) {
      throw std::invalid_argument("camera baseline and focal length must be positive");
    }
  }
};

/// depth = baseline * focal / disparity. Zero or missing disparity maps to
/// missing depth (infinite-distance sentinel).
DepthMap disparity_to_depth(const DisparityMap& d, const CameraModel& cam);

/// Inverse of disparity_to_depth on finite pixels.
DisparityMap depth_to_disparity(const DepthMap& depth, const CameraModel& cam);

/// Converts z-depth (distance along the optical axis) to Euclidean distance
/// from the camera center, pinhole model with the principal point at the
/// image center.
DepthMap euclidean_from_planar(const DepthMap& z, const CameraModel& cam);

/// t = exp(-beta * depth) per finite pixel; missing propagates. beta >= 0.
TransmittanceMap transmittance_from_depth(const DepthMap& depth, double beta);

}  // namespace foghorn
