#include "foghorn/depth_completion.hpp"

#include "foghorn/parallel.hpp"
#include "foghorn/plane_fit.hpp"
#include "foghorn/superpixels.hpp"

#include <cmath>
#include <limits>

namespace foghorn {

namespace {

// Floor for filled depth so transmittance stays in (0,1] even when an
// extrapolated plane dips non-physical.
constexpr double kMinDepthM = 1e-2;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  // splitmix64 step
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

struct SuperpixelState {
  std::vector<DepthSample> valid;
  std::size_t pixel_count = 0;
  double cx = 0, cy = 0;
  Plane plane;
  bool completed = false;
};

}  // namespace

void CompletionParams::validate() const {
  if (superpixel_count < 1) throw std::invalid_argument("superpixel count must be positive");
  if (!(compactness > 0)) throw std::invalid_argument("compactness must be positive");
  if (ransac_iters < 1) throw std::invalid_argument("ransac iteration count must be positive");
  if (!(inlier_tol_m > 0)) throw std::invalid_argument("inlier tolerance must be positive");
  if (!(min_valid_fraction > 0) || min_valid_fraction > 1) {
    throw std::invalid_argument("min valid fraction must be in (0,1]");
  }
}

DepthMap complete_depth(const DisparityMap& d, const ImageLab& img, const CameraModel& cam,
                        const CompletionParams& params, std::uint64_t seed) {
  require_same_size(d, img, "depth completion");
  params.validate();

  const DepthMap planar = disparity_to_depth(d, cam);
  const DepthMap depth = euclidean_from_planar(planar, cam);

  const int k = static_cast<int>(
      std::min<std::size_t>(params.superpixel_count, depth.pixel_count()));
  const SuperpixelSegmentation seg = slic_superpixels(img, k, params.compactness);

  std::vector<SuperpixelState> sp(seg.k);
  for (int y = 0; y < depth.height; ++y) {
    for (int x = 0; x < depth.width; ++x) {
      SuperpixelState& s = sp[seg.at(x, y)];
      ++s.pixel_count;
      s.cx += x;
      s.cy += y;
      const double v = depth.at(x, y);
      if (!is_missing(v)) s.valid.push_back({static_cast<double>(x), static_cast<double>(y), v});
    }
  }
  for (auto& s : sp) {
    s.cx /= static_cast<double>(s.pixel_count);
    s.cy /= static_cast<double>(s.pixel_count);
  }

  // Independent per-superpixel fits; the per-id seed keeps the result
  // identical for every parallelism degree.
  parallel_for(static_cast<std::int64_t>(sp.size()), [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      SuperpixelState& s = sp[i];
      const double fraction = static_cast<double>(s.valid.size()) / s.pixel_count;
      if (s.valid.size() < 3 || fraction < params.min_valid_fraction) continue;
      try {
        s.plane = fit_plane_ransac(s.valid, params.ransac_iters, params.inlier_tol_m,
                                   mix_seed(seed, static_cast<std::uint64_t>(i)));
        s.completed = true;
      } catch (const std::runtime_error&) {
        // degenerate geometry; resolved by inheritance below
      }
    }
  });

  // Sparse superpixels inherit the nearest completed plane.
  std::vector<int> donor(sp.size(), -1);
  for (std::size_t i = 0; i < sp.size(); ++i) {
    if (sp[i].completed) continue;
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < sp.size(); ++j) {
      if (!sp[j].completed) continue;
      const double dx = sp[i].cx - sp[j].cx;
      const double dy = sp[i].cy - sp[j].cy;
      const double d2 = dx * dx + dy * dy;
      if (d2 < nearest) {
        nearest = d2;
        donor[i] = static_cast<int>(j);
      }
    }
    if (donor[i] == -1) {
      throw std::runtime_error(
          "depth completion failed: no superpixel has enough valid depth to fit a plane");
    }
    sp[i].plane = sp[donor[i]].plane;
  }

  DepthMap out(depth.width, depth.height);
  parallel_for(depth.height, [&](std::int64_t y0, std::int64_t y1) {
    for (std::int64_t y = y0; y < y1; ++y) {
      for (int x = 0; x < depth.width; ++x) {
        const Plane& plane = sp[seg.at(x, static_cast<int>(y))].plane;
        const double measured = depth.at(x, static_cast<int>(y));
        const double fitted = plane.eval(x, static_cast<double>(y));
        double v;
        if (is_missing(measured) || std::fabs(measured - fitted) > params.inlier_tol_m) {
          v = std::max(fitted, kMinDepthM);
        } else {
          v = measured;
        }
        out.at(x, static_cast<int>(y)) = v;
      }
    }
  });
  return out;
}

TransmittanceMap complete_transmittance(const DisparityMap& d, const ImageLab& img,
                                        const CameraModel& cam, double beta,
                                        const CompletionParams& params, std::uint64_t seed) {
  if (beta < 0) throw std::invalid_argument("attenuation coefficient must be non-negative");
  const DepthMap depth = complete_depth(d, img, cam, params, seed);
  return transmittance_from_depth(depth, beta);
}

}  // namespace foghorn
