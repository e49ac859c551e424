#pragma once

#include "foghorn/image.hpp"
#include "foghorn/imaging.hpp"

#include <cstdint>

namespace foghorn {

struct CompletionParams {
  int superpixel_count = 2048;
  double compactness = 10.0;
  int ransac_iters = 500;
  double inlier_tol_m = 0.5;
  double min_valid_fraction = 0.2;

  void validate() const;
};

/// Denoises and completes a sparse depth map by robust plane fitting per
/// SLIC superpixel. Valid pixels within inlier_tol_m of their superpixel's
/// plane are kept; outliers and holes take the plane depth. Superpixels
/// with too few valid samples inherit the plane of the nearest completed
/// superpixel (centroid distance). Output has no missing values.
DepthMap complete_depth(const DisparityMap& d, const ImageLab& img, const CameraModel& cam,
                        const CompletionParams& params, std::uint64_t seed);

/// complete_depth followed by t = exp(-beta * depth). All outputs in (0,1].
TransmittanceMap complete_transmittance(const DisparityMap& d, const ImageLab& img,
                                        const CameraModel& cam, double beta,
                                        const CompletionParams& params, std::uint64_t seed);

}  // namespace foghorn
