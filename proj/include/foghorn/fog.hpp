#pragma once

#include "foghorn/bilateral.hpp"
#include "foghorn/depth_completion.hpp"
#include "foghorn/image.hpp"
#include "foghorn/imaging.hpp"

#include <array>
#include <cstdint>
#include <optional>

namespace foghorn {

/// Fog begins where the meteorological optical range drops below 1 km,
/// i.e. beta >= 2.996e-3 / m. Smaller positive values are haze.
inline constexpr double kMinFogBeta = 2.996e-3;

/// MOR = 2.996 / beta for homogeneous fog. beta must be positive.
double mor_from_beta(double beta);
double beta_from_mor(double mor);

/// Accepts beta = 0 (no fog) and beta >= kMinFogBeta. Positive sub-fog
/// densities are rejected unless allow_haze is set.
void validate_beta(double beta, bool allow_haze);

struct FogConfig {
  double beta = 0.01;
  /// sRGB atmospheric light; unset means estimate from the clear image.
  std::optional<std::array<double, 3>> atmospheric_light;
  bool allow_haze = false;

  void validate() const;
};

/// Dark-channel based estimate: among the top `quantile` fraction of
/// pixels by dark-channel value (15x15 min filter over channel minima),
/// returns the sRGB color of the one with the highest linear luminance.
std::array<double, 3> estimate_atmospheric_light(const ImageRGB& img, double quantile = 1e-3);

/// Optical fog model I = R*t + L*(1 - t), blended per channel in linear
/// RGB and re-encoded to sRGB.
ImageRGB synthesize_fog(const ImageRGB& clear, const TransmittanceMap& t,
                        const std::array<double, 3>& atmospheric_light);

struct SimulationResult {
  ImageRGB foggy;
  TransmittanceMap transmittance;
  std::array<double, 3> atmospheric_light{};
};

/// Full fog-rendering pipeline: CIELAB conversion, depth completion to the
/// initial transmittance map, dual-reference cross-bilateral refinement,
/// atmospheric-light estimation, and the optical-model blend.
SimulationResult simulate_scene(const ImageRGB& clear, const DisparityMap& d,
                                const SemanticLabeling& h, const CameraModel& cam,
                                const FogConfig& fog, const CompletionParams& comp,
                                const FilterParams& filt, std::uint64_t seed = 1,
                                const GridOptions& grid = {});

}  // namespace foghorn
