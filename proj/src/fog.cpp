#include "foghorn/fog.hpp"

#include "foghorn/color.hpp"
#include "foghorn/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace foghorn {

double mor_from_beta(double beta) {
  if (!(beta > 0)) throw std::invalid_argument("MOR is defined for positive beta only");
  return 2.996 / beta;
}

double beta_from_mor(double mor) {
  if (!(mor > 0)) throw std::invalid_argument("MOR must be positive");
  return 2.996 / mor;
}

void validate_beta(double beta, bool allow_haze) {
  if (beta < 0) throw std::invalid_argument("attenuation coefficient must be non-negative");
  if (beta > 0 && beta < kMinFogBeta && !allow_haze) {
    throw std::invalid_argument(
        "beta = " + std::to_string(beta) + " is below the fog threshold 2.996e-3 1/m (MOR 1 km); "
        "pass --allow-haze to render sub-fog haze");
  }
}

void FogConfig::validate() const {
  validate_beta(beta, allow_haze);
  if (atmospheric_light) {
    for (const double c : *atmospheric_light) {
      if (!(c >= 0.0 && c <= 1.0)) {
        throw std::invalid_argument("atmospheric light channels must be in [0,1]");
      }
    }
  }
}

namespace {

constexpr int kDarkChannelWindow = 15;

// Min filter over a centered window, separable by axis.
std::vector<double> min_filter(const std::vector<double>& in, int w, int h, int window) {
  const int radius = window / 2;
  std::vector<double> tmp(in.size()), out(in.size());
  parallel_for(h, [&](std::int64_t y0, std::int64_t y1) {
    for (std::int64_t y = y0; y < y1; ++y) {
      for (int x = 0; x < w; ++x) {
        double m = in[y * w + std::max(0, x - radius)];
        for (int q = std::max(0, x - radius); q <= std::min(w - 1, x + radius); ++q) {
          m = std::min(m, in[y * w + q]);
        }
        tmp[y * w + x] = m;
      }
    }
  });
  parallel_for(h, [&](std::int64_t y0, std::int64_t y1) {
    for (std::int64_t y = y0; y < y1; ++y) {
      for (int x = 0; x < w; ++x) {
        double m = tmp[static_cast<std::size_t>(std::max<std::int64_t>(0, y - radius)) * w + x];
        for (std::int64_t q = std::max<std::int64_t>(0, y - radius);
             q <= std::min<std::int64_t>(h - 1, y + radius); ++q) {
          m = std::min(m, tmp[q * w + x]);
        }
        out[y * w + x] = m;
      }
    }
  });
  return out;
}

}  // namespace

std::array<double, 3> estimate_atmospheric_light(const ImageRGB& img, double quantile) {
  const std::size_t n = img.pixel_count();
  if (n == 0) throw std::invalid_argument("cannot estimate atmospheric light of an empty image");
  if (!(quantile > 0) || quantile > 1) {
    throw std::invalid_argument("quantile must be in (0,1]");
  }

  std::vector<double> channel_min(n);
  for (std::size_t i = 0; i < n; ++i) {
    channel_min[i] =
        std::min({img.data[3 * i + 0], img.data[3 * i + 1], img.data[3 * i + 2]});
  }
  const std::vector<double> dark =
      min_filter(channel_min, img.width, img.height, kDarkChannelWindow);

  const std::size_t count = std::max<std::size_t>(1, static_cast<std::size_t>(
                                                         std::llround(quantile * n)));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::nth_element(order.begin(), order.begin() + (count - 1), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return dark[a] != dark[b] ? dark[a] > dark[b] : a < b;
                   });

  // Brightest pixel (linear luminance) among the haziest candidates;
  // first in row-major order on ties.
  std::size_t best = n;
  double best_luma = -1.0;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t pi = order[i];
    const double luma = linear_luminance(srgb_to_linear(img.data[3 * pi + 0]),
                                         srgb_to_linear(img.data[3 * pi + 1]),
                                         srgb_to_linear(img.data[3 * pi + 2]));
    if (luma > best_luma || (luma == best_luma && pi < best)) {
      best_luma = luma;
      best = pi;
    }
  }
  return {img.data[3 * best + 0], img.data[3 * best + 1], img.data[3 * best + 2]};
}

ImageRGB synthesize_fog(const ImageRGB& clear, const TransmittanceMap& t,
                        const std::array<double, 3>& atmospheric_light) {
  require_same_size(clear, t, "fog synthesis");
  const std::array<double, 3> light_lin = {srgb_to_linear(atmospheric_light[0]),
                                           srgb_to_linear(atmospheric_light[1]),
                                           srgb_to_linear(atmospheric_light[2])};
  ImageRGB out(clear.width, clear.height);
  parallel_for(clear.pixel_count(), [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      const double ti = t.data[i];
      for (int c = 0; c < 3; ++c) {
        const double radiance = srgb_to_linear(clear.data[3 * i + c]);
        const double observed = radiance * ti + light_lin[c] * (1.0 - ti);
        out.data[3 * i + c] = std::clamp(linear_to_srgb(observed), 0.0, 1.0);
      }
    }
  });
  return out;
}

SimulationResult simulate_scene(const ImageRGB& clear, const DisparityMap& d,
                                const SemanticLabeling& h, const CameraModel& cam,
                                const FogConfig& fog, const CompletionParams& comp,
                                const FilterParams& filt, std::uint64_t seed,
                                const GridOptions& grid) {
  fog.validate();
  require_same_size(clear, d, "scene simulation");
  require_same_size(clear, h, "scene simulation");

  const ImageLab lab = srgb_to_lab(clear);
  const TransmittanceMap initial = complete_transmittance(d, lab, cam, fog.beta, comp, seed);
  const TransmittanceMap refined = filter_grid(initial, lab, h, filt, grid);

  SimulationResult result;
  result.atmospheric_light =
      fog.atmospheric_light ? *fog.atmospheric_light : estimate_atmospheric_light(clear);
  result.foggy = synthesize_fog(clear, refined, result.atmospheric_light);
  result.transmittance = refined;
  return result;
}

}  // namespace foghorn
