#include "foghorn/density.hpp"

#include "foghorn/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace foghorn {

namespace {

constexpr int kDarkWindow = 15;
constexpr int kContrastRadius = 3;  // 7x7 window
constexpr double kBrightThreshold = 0.7;
constexpr int kModelSchemaVersion = 1;

double luma(const ImageRGB& img, std::size_t i) {
  return 0.2126 * img.data[3 * i + 0] + 0.7152 * img.data[3 * i + 1] +
         0.0722 * img.data[3 * i + 2];
}

}  // namespace

FeatureVector extract_features(const ImageRGB& img) {
  const int w = img.width, h = img.height;
  const std::size_t n = img.pixel_count();
  if (n == 0) throw std::invalid_argument("cannot extract features of an empty image");

  std::vector<double> lum(n), channel_min(n);
  for (std::size_t i = 0; i < n; ++i) {
    lum[i] = luma(img, i);
    channel_min[i] =
        std::min({img.data[3 * i + 0], img.data[3 * i + 1], img.data[3 * i + 2]});
  }

  // dark channel: separable min filter
  const int dr = kDarkWindow / 2;
  std::vector<double> tmp(n), dark(n);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double m = channel_min[static_cast<std::size_t>(y) * w + std::max(0, x - dr)];
      for (int q = std::max(0, x - dr); q <= std::min(w - 1, x + dr); ++q) {
        m = std::min(m, channel_min[static_cast<std::size_t>(y) * w + q]);
      }
      tmp[static_cast<std::size_t>(y) * w + x] = m;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double m = tmp[static_cast<std::size_t>(std::max(0, y - dr)) * w + x];
      for (int q = std::max(0, y - dr); q <= std::min(h - 1, y + dr); ++q) {
        m = std::min(m, tmp[static_cast<std::size_t>(q) * w + x]);
      }
      dark[static_cast<std::size_t>(y) * w + x] = m;
    }
  }

  double dark_sum = 0.0;
  for (const double v : dark) dark_sum += v;

  // local contrast: population std of luma over clamped 7x7 windows
  double contrast_sum = 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0, s2 = 0.0;
      int count = 0;
      for (int qy = std::max(0, y - kContrastRadius); qy <= std::min(h - 1, y + kContrastRadius);
           ++qy) {
        for (int qx = std::max(0, x - kContrastRadius);
             qx <= std::min(w - 1, x + kContrastRadius); ++qx) {
          const double v = lum[static_cast<std::size_t>(qy) * w + qx];
          s += v;
          s2 += v * v;
          ++count;
        }
      }
      const double mean = s / count;
      const double var = std::max(0.0, s2 / count - mean * mean);
      contrast_sum += std::sqrt(var);
    }
  }

  // gradient magnitude: central differences with clamped indices
  double gradient_sum = 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double gx = (lum[static_cast<std::size_t>(y) * w + std::min(w - 1, x + 1)] -
                         lum[static_cast<std::size_t>(y) * w + std::max(0, x - 1)]) /
                        2.0;
      const double gy = (lum[static_cast<std::size_t>(std::min(h - 1, y + 1)) * w + x] -
                         lum[static_cast<std::size_t>(std::max(0, y - 1)) * w + x]) /
                        2.0;
      gradient_sum += std::sqrt(gx * gx + gy * gy);
    }
  }

  double bright_count = 0.0, saturation_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (lum[i] > kBrightThreshold) bright_count += 1.0;
    const double mx =
        std::max({img.data[3 * i + 0], img.data[3 * i + 1], img.data[3 * i + 2]});
    saturation_sum += mx == 0.0 ? 0.0 : (mx - channel_min[i]) / mx;
  }

  FeatureVector f;
  f.values[0] = dark_sum / n;
  f.values[1] = contrast_sum / n;
  f.values[2] = gradient_sum / n;
  f.values[3] = bright_count / n;
  f.values[4] = saturation_sum / n;
  return f;
}

namespace {

constexpr int kAug = FeatureVector::kDim + 1;  // weights + bias

// Gaussian elimination with partial pivoting on the (kDim+1) normal
// equations. Returns false on a (near-)singular system.
bool solve_normal(std::array<std::array<double, kAug>, kAug>& m, std::array<double, kAug>& rhs,
                  std::array<double, kAug>& out) {
  double scale = 0.0;
  for (const auto& row : m) {
    for (const double v : row) scale = std::max(scale, std::fabs(v));
  }
  if (scale == 0.0) return false;
  for (int col = 0; col < kAug; ++col) {
    int pivot = col;
    for (int row = col + 1; row < kAug; ++row) {
      if (std::fabs(m[row][col]) > std::fabs(m[pivot][col])) pivot = row;
    }
    if (std::fabs(m[pivot][col]) < 1e-12 * scale) return false;
    std::swap(m[col], m[pivot]);
    std::swap(rhs[col], rhs[pivot]);
    for (int row = col + 1; row < kAug; ++row) {
      const double f = m[row][col] / m[col][col];
      for (int c = col; c < kAug; ++c) m[row][c] -= f * m[col][c];
      rhs[row] -= f * rhs[col];
    }
  }
  for (int row = kAug - 1; row >= 0; --row) {
    double v = rhs[row];
    for (int c = row + 1; c < kAug; ++c) v -= m[row][c] * out[c];
    out[row] = v / m[row][row];
  }
  return true;
}

}  // namespace

DensityModel fit_density_regressor(
    const std::vector<std::pair<FeatureVector, double>>& samples,
    const std::vector<double>& sample_weights, double ridge) {
  if (ridge < 0) throw std::invalid_argument("ridge must be non-negative");
  if (samples.size() < kAug) {
    throw std::invalid_argument("ridge fit needs at least " + std::to_string(kAug) + " samples");
  }
  if (!sample_weights.empty() && sample_weights.size() != samples.size()) {
    throw std::invalid_argument("sample weight count does not match sample count");
  }

  std::array<std::array<double, kAug>, kAug> m{};
  std::array<double, kAug> rhs{};
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const double wt = sample_weights.empty() ? 1.0 : sample_weights[s];
    std::array<double, kAug> row{};
    for (int d = 0; d < FeatureVector::kDim; ++d) row[d] = samples[s].first.values[d];
    row[kAug - 1] = 1.0;
    for (int i = 0; i < kAug; ++i) {
      for (int j = 0; j < kAug; ++j) m[i][j] += wt * row[i] * row[j];
      rhs[i] += wt * row[i] * samples[s].second;
    }
  }
  // Penalty on the weights only, not the bias.
  for (int d = 0; d < FeatureVector::kDim; ++d) m[d][d] += ridge;

  std::array<double, kAug> solution{};
  if (!solve_normal(m, rhs, solution)) {
    throw std::runtime_error(
        "density fit failed: normal equations are rank-deficient (try ridge > 0)");
  }
  DensityModel model;
  for (int d = 0; d < FeatureVector::kDim; ++d) model.weights[d] = solution[d];
  model.bias = solution[kAug - 1];
  model.ridge = ridge;
  model.fitted = true;
  return model;
}

DensityModel fit_density_regressor(
    const std::vector<std::pair<FeatureVector, double>>& samples, double ridge) {
  return fit_density_regressor(samples, {}, ridge);
}

double apply_model(const DensityModel& model, const FeatureVector& features) {
  if (!model.fitted) throw std::invalid_argument("density model has not been fitted");
  double v = model.bias;
  for (int d = 0; d < FeatureVector::kDim; ++d) v += model.weights[d] * features.values[d];
  return std::max(0.0, v);
}

double estimate_beta(const DensityModel& model, const ImageRGB& img) {
  return apply_model(model, extract_features(img));
}

RankedDataset rank_scores(std::vector<std::pair<std::string, double>> scores) {
  if (scores.empty()) throw std::invalid_argument("cannot rank an empty dataset");
  std::stable_sort(scores.begin(), scores.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second < b.second : a.first < b.first;
  });
  RankedDataset ranked(scores.size());
  const std::size_t n = scores.size();
  for (std::size_t i = 0; i < n; ++i) {
    ranked[i].id = std::move(scores[i].first);
    ranked[i].beta_hat = scores[i].second;
    ranked[i].percentile = n == 1 ? 0.0 : 100.0 * static_cast<double>(i) / (n - 1);
  }
  return ranked;
}

RankedDataset rank_dataset(const DensityModel& model,
                           const std::vector<std::pair<std::string, ImageRGB>>& images) {
  if (images.empty()) throw std::invalid_argument("cannot rank an empty dataset");
  std::vector<std::pair<std::string, double>> scores(images.size());
  parallel_for(static_cast<std::int64_t>(images.size()),
               [&](std::int64_t begin, std::int64_t end) {
                 for (std::int64_t i = begin; i < end; ++i) {
                   scores[i] = {images[i].first, estimate_beta(model, images[i].second)};
                 }
               });
  return rank_scores(std::move(scores));
}

void save_density_model(const DensityModel& model, const std::filesystem::path& path) {
  if (!model.fitted) throw std::invalid_argument("refusing to save an unfitted model");
  nlohmann::json j;
  j["schema_version"] = kModelSchemaVersion;
  j["feature_names"] = {"dark_channel_mean", "local_contrast_mean", "gradient_mean",
                        "bright_fraction", "saturation_mean"};
  j["weights"] = model.weights;
  j["bias"] = model.bias;
  j["ridge"] = model.ridge;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << j.dump(2) << "\n";
}

DensityModel load_density_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path.string() + ": cannot open density model");
  nlohmann::json j;
  in >> j;
  if (j.value("schema_version", 0) != kModelSchemaVersion) {
    throw std::runtime_error(path.string() + ": unsupported density model schema");
  }
  DensityModel model;
  const auto weights = j.at("weights").get<std::vector<double>>();
  if (weights.size() != FeatureVector::kDim) {
    throw std::runtime_error(path.string() + ": weight vector has the wrong dimension");
  }
  std::copy(weights.begin(), weights.end(), model.weights.begin());
  model.bias = j.at("bias").get<double>();
  model.ridge = j.value("ridge", 0.0);
  model.fitted = true;
  return model;
}

}  // namespace foghorn
