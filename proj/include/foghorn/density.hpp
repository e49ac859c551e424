#pragma once

#include "foghorn/image.hpp"

#include <array>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace foghorn {

/// Fog-sensitive image statistics, fixed order:
///   0 mean dark-channel value (15x15 min filter over channel minima)
///   1 mean local contrast (population std of luma in 7x7 windows)
///   2 mean gradient magnitude of luma (central differences, clamped)
///   3 fraction of pixels with luma > 0.7
///   4 mean HSV saturation
/// Luma is 0.2126 r + 0.7152 g + 0.0722 b on the stored sRGB values.
struct FeatureVector {
  static constexpr int kDim = 5;
  std::array<double, kDim> values{};
};

FeatureVector extract_features(const ImageRGB& img);

/// Linear ridge regressor FeatureVector -> beta.
struct DensityModel {
  std::array<double, FeatureVector::kDim> weights{};
  double bias = 0.0;
  double ridge = 0.0;
  bool fitted = false;
};

/// Ridge least squares on (features, beta) pairs; the penalty applies to
/// the weights, not the bias. Throws when the normal equations are
/// rank-deficient (possible only with ridge = 0) or on too few samples.
DensityModel fit_density_regressor(
    const std::vector<std::pair<FeatureVector, double>>& samples, double ridge);

/// Weighted variant; sample_weights scales each sample's contribution to
/// the normal equations.
DensityModel fit_density_regressor(
    const std::vector<std::pair<FeatureVector, double>>& samples,
    const std::vector<double>& sample_weights, double ridge);

/// Applies the model; estimates are clamped below at 0.
double apply_model(const DensityModel& model, const FeatureVector& features);
double estimate_beta(const DensityModel& model, const ImageRGB& img);

struct RankedImage {
  std::string id;
  double beta_hat = 0.0;
  double percentile = 0.0;
};

/// Ascending by beta_hat, ties broken by id. Percentile = 100*rank/(n-1),
/// 0 for a single-element dataset.
using RankedDataset = std::vector<RankedImage>;

RankedDataset rank_scores(std::vector<std::pair<std::string, double>> scores);
RankedDataset rank_dataset(const DensityModel& model,
                           const std::vector<std::pair<std::string, ImageRGB>>& images);

void save_density_model(const DensityModel& model, const std::filesystem::path& path);
DensityModel load_density_model(const std::filesystem::path& path);

}  // namespace foghorn
