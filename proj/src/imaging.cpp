#include "foghorn/imaging.hpp"

#include "foghorn/parallel.hpp"

#include <cmath>

namespace foghorn {

DepthMap disparity_to_depth(const DisparityMap& d, const CameraModel& cam) {
  cam.validate();
  const double bf = cam.baseline_m * cam.focal_length_px;
  DepthMap out(d.width, d.height);
  parallel_for(d.pixel_count(), [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      const double v = d.data[i];
      out.data[i] = (is_missing(v) || v == 0.0) ? missing() : bf / v;
    }
  });
  return out;
}

DisparityMap depth_to_disparity(const DepthMap& depth, const CameraModel& cam) {
  cam.validate();
  const double bf = cam.baseline_m * cam.focal_length_px;
  DisparityMap out(depth.width, depth.height);
  parallel_for(depth.pixel_count(), [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      const double v = depth.data[i];
      out.data[i] = is_missing(v) ? missing() : bf / v;
    }
  });
  return out;
}

DepthMap euclidean_from_planar(const DepthMap& z, const CameraModel& cam) {
  cam.validate();
  const double cx = (z.width - 1) / 2.0;
  const double cy = (z.height - 1) / 2.0;
  const double f = cam.focal_length_px;
  DepthMap out(z.width, z.height);
  parallel_for(z.height, [&](std::int64_t y0, std::int64_t y1) {
    for (std::int64_t y = y0; y < y1; ++y) {
      const double dy = (y - cy) / f;
      for (int x = 0; x < z.width; ++x) {
        const double v = z.at(x, static_cast<int>(y));
        if (is_missing(v)) {
          out.at(x, static_cast<int>(y)) = missing();
        } else {
          const double dx = (x - cx) / f;
          out.at(x, static_cast<int>(y)) = v * std::sqrt(1.0 + dx * dx + dy * dy);
        }
      }
    }
  });
  return out;
}

TransmittanceMap transmittance_from_depth(const DepthMap& depth, double beta) {
  if (beta < 0.0) throw std::invalid_argument("attenuation coefficient must be non-negative");
  TransmittanceMap out(depth.width, depth.height);
  parallel_for(depth.pixel_count(), [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      const double v = depth.data[i];
      out.data[i] = is_missing(v) ? missing() : std::exp(-beta * v);
    }
  });
  return out;
}

}  // namespace foghorn
