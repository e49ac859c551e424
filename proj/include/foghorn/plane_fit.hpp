#pragma once

#include <cstdint>
#include <vector>

namespace foghorn {

/// depth = a*x + b*y + c, x/y in pixels, depth in meters.
struct Plane {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  double eval(double x, double y) const { return a * x + b * y + c; }
};

struct DepthSample {
  double x = 0.0;
  double y = 0.0;
  double depth = 0.0;
};

/// Least-squares plane through all samples. Throws on < 3 samples or a
/// degenerate (collinear) configuration.
Plane fit_plane_least_squares(const std::vector<DepthSample>& samples);

/// RANSAC: the plane maximizing the inlier count (|residual| <= tol),
/// refit by least squares on the final inlier set. Deterministic for a
/// given seed. Throws on < 3 samples, or when every sampled triple is
/// collinear after `iters` attempts.
Plane fit_plane_ransac(const std::vector<DepthSample>& samples, int iters, double tol,
                       std::uint64_t seed);

}  // namespace foghorn
