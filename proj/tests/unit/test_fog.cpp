#include "foghorn/fog.hpp"

#include "foghorn/color.hpp"
#include "synthetic.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace foghorn;

namespace {

CompletionParams quick_completion() {
  CompletionParams p;
  p.superpixel_count = 16;
  p.ransac_iters = 100;
  return p;
}

double channel_std(const ImageRGB& img, int c) {
  double s = 0, s2 = 0;
  const std::size_t n = img.pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    s += img.data[3 * i + c];
    s2 += img.data[3 * i + c] * img.data[3 * i + c];
  }
  const double mean = s / n;
  return std::sqrt(std::max(0.0, s2 / n - mean * mean));
}

}  // namespace

TEST_SUITE("fog") {

TEST_CASE("MOR arithmetic") {
  CHECK(mor_from_beta(0.02) == doctest::Approx(149.8).epsilon(1e-12));
  CHECK(mor_from_beta(2.996e-3) == doctest::Approx(1000.0).epsilon(1e-12));
  CHECK(mor_from_beta(0.005) == doctest::Approx(599.2).epsilon(1e-12));
  CHECK_THROWS_AS(mor_from_beta(0.0), std::invalid_argument);
  CHECK_THROWS_AS(mor_from_beta(-0.01), std::invalid_argument);
}

TEST_CASE("MOR round trip is exact") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> beta(1e-4, 0.5);
  for (int i = 0; i < 200; ++i) {
    const double b = beta(gen);
    const double round = beta_from_mor(mor_from_beta(b));
    CHECK(std::fabs(round - b) <= 1e-12 * b);
  }
}

TEST_CASE("beta validation enforces the fog bound") {
  CHECK_NOTHROW(validate_beta(0.0, false));
  CHECK_NOTHROW(validate_beta(2.996e-3, false));
  CHECK_NOTHROW(validate_beta(0.02, false));
  CHECK_THROWS_AS(validate_beta(0.001, false), std::invalid_argument);
  CHECK_THROWS_AS(validate_beta(0.00299, false), std::invalid_argument);
  CHECK_NOTHROW(validate_beta(0.001, true));  // haze explicitly allowed
  CHECK_THROWS_AS(validate_beta(-0.001, true), std::invalid_argument);
}

TEST_CASE("atmospheric light of a uniform image is its color") {
  const ImageRGB img = ImageRGB::constant(40, 30, 0.6, 0.6, 0.6);
  const auto light = estimate_atmospheric_light(img);
  CHECK(light[0] == doctest::Approx(0.6));
  CHECK(light[1] == doctest::Approx(0.6));
  CHECK(light[2] == doctest::Approx(0.6));
}

TEST_CASE("atmospheric light round trip on a rendered scene") {
  const testing::SyntheticScene scene = testing::make_scene(96, 64, 77);
  const TransmittanceMap t = transmittance_from_depth(scene.depth, 0.03);
  const std::array<double, 3> light{0.8, 0.8, 0.8};
  const ImageRGB foggy = synthesize_fog(scene.rgb, t, light);
  const auto estimate = estimate_atmospheric_light(foggy);
  for (int c = 0; c < 3; ++c) CHECK(std::fabs(estimate[c] - light[c]) < 0.05);
}

TEST_CASE("optical model fixed points") {
  const testing::SyntheticScene scene = testing::make_scene(48, 32, 13);
  const std::array<double, 3> light{0.7, 0.72, 0.74};

  SUBCASE("t = 1 returns the input") {
    TransmittanceMap t(48, 32, 1.0);
    const ImageRGB out = synthesize_fog(scene.rgb, t, light);
    for (std::size_t i = 0; i < out.data.size(); ++i) {
      CHECK(std::fabs(out.data[i] - scene.rgb.data[i]) < 1e-12);
    }
  }

  SUBCASE("t = 0 returns the atmospheric light") {
    TransmittanceMap t(48, 32, 0.0);
    const ImageRGB out = synthesize_fog(scene.rgb, t, light);
    for (std::size_t i = 0; i < out.pixel_count(); ++i) {
      for (int c = 0; c < 3; ++c) CHECK(std::fabs(out.data[3 * i + c] - light[c]) < 1e-12);
    }
  }

  SUBCASE("radiance equal to the light is invariant for any t") {
    const ImageRGB flat = ImageRGB::constant(48, 32, 0.7, 0.72, 0.74);
    const TransmittanceMap t = testing::random_transmittance(48, 32, 14);
    const ImageRGB out = synthesize_fog(flat, t, light);
    for (std::size_t i = 0; i < out.pixel_count(); ++i) {
      for (int c = 0; c < 3; ++c) CHECK(std::fabs(out.data[3 * i + c] - light[c]) < 1e-12);
    }
  }

  SUBCASE("dimension mismatch rejected") {
    TransmittanceMap t(24, 32, 1.0);
    CHECK_THROWS_AS(synthesize_fog(scene.rgb, t, light), std::invalid_argument);
  }
}

TEST_CASE("blend is a convex combination in linear RGB") {
  const testing::SyntheticScene scene = testing::make_scene(48, 32, 15);
  const TransmittanceMap t = testing::random_transmittance(48, 32, 16);
  const std::array<double, 3> light{0.9, 0.85, 0.8};
  const ImageRGB out = synthesize_fog(scene.rgb, t, light);
  for (std::size_t i = 0; i < out.pixel_count(); ++i) {
    for (int c = 0; c < 3; ++c) {
      const double r = srgb_to_linear(scene.rgb.data[3 * i + c]);
      const double l = srgb_to_linear(light[c]);
      const double v = srgb_to_linear(out.data[3 * i + c]);
      CHECK(v >= std::min(r, l) - 1e-9);
      CHECK(v <= std::max(r, l) + 1e-9);
    }
  }
}

TEST_CASE("contrast is non-increasing in beta") {
  const testing::SyntheticScene scene = testing::make_scene(96, 64, 18);
  const std::array<double, 3> light{0.8, 0.8, 0.8};
  double previous[3] = {1e9, 1e9, 1e9};
  bool first = true;
  for (const double beta : {0.005, 0.01, 0.02}) {
    const ImageRGB foggy =
        synthesize_fog(scene.rgb, transmittance_from_depth(scene.depth, beta), light);
    for (int c = 0; c < 3; ++c) {
      const double s = channel_std(foggy, c);
      if (!first) CHECK(s <= previous[c] + 1e-12);
      previous[c] = s;
    }
    first = false;
  }
}

TEST_CASE("fog config overrides skip estimation") {
  const testing::SyntheticScene scene = testing::make_scene(64, 48, 19);
  FogConfig fog;
  fog.beta = 0.02;
  fog.atmospheric_light = {{0.5, 0.6, 0.7}};
  const SimulationResult result =
      simulate_scene(scene.rgb, scene.disparity, scene.labels, scene.camera, fog,
                     quick_completion(), FilterParams::with_sigmas(5.0, 8.0, 10.0));
  CHECK(result.atmospheric_light[0] == 0.5);
  CHECK(result.atmospheric_light[1] == 0.6);
  CHECK(result.atmospheric_light[2] == 0.7);
}

TEST_CASE("planar scene matches the closed-form composition") {
  // fronto-parallel plane: completion and filtering are exact no-ops
  const int n = 64;
  CameraModel cam;
  cam.baseline_m = 0.2;
  cam.focal_length_px = 400.0;
  const double depth_m = 50.0;
  const DisparityMap d = testing::disparity_from_depth_plane(n, n, cam, 0.0, 0.0, depth_m);

  ImageRGB clear(n, n);
  std::mt19937_64 gen(20);
  auto field = testing::smooth_noise(n, n, 0.1, 0.9, 3, gen);
  for (std::size_t i = 0; i < clear.pixel_count(); ++i) {
    clear.data[3 * i + 0] = field[i];
    clear.data[3 * i + 1] = field[i] * 0.9;
    clear.data[3 * i + 2] = field[i] * 0.8 + 0.1;
  }
  const SemanticLabeling labels(n, n, 19, 1);

  FogConfig fog;
  fog.beta = 0.01;
  fog.atmospheric_light = {{0.85, 0.85, 0.85}};
  const SimulationResult result = simulate_scene(
      clear, d, labels, cam, fog, quick_completion(), FilterParams::with_sigmas(5.0, 20.0, 10.0));

  const double t = std::exp(-fog.beta * depth_m);
  for (std::size_t i = 0; i < clear.pixel_count(); ++i) {
    for (int c = 0; c < 3; ++c) {
      const double expected = linear_to_srgb(srgb_to_linear(clear.data[3 * i + c]) * t +
                                             srgb_to_linear(0.85) * (1.0 - t));
      CHECK(std::fabs(result.foggy.data[3 * i + c] - expected) < 1e-3);
    }
  }
}

TEST_CASE("lighter fog deviates less from the clear scene") {
  const testing::SyntheticScene scene = testing::make_scene(64, 48, 21);
  FogConfig fog;
  fog.atmospheric_light = {{0.8, 0.8, 0.8}};
  const FilterParams filt = FilterParams::with_sigmas(5.0, 8.0, 10.0);

  double mean_dev[2];
  int slot = 0;
  for (const double beta : {2.996e-3, 0.02}) {
    fog.beta = beta;
    const SimulationResult result = simulate_scene(scene.rgb, scene.disparity, scene.labels,
                                                   scene.camera, fog, quick_completion(), filt);
    double dev = 0;
    for (std::size_t i = 0; i < scene.rgb.pixel_count(); ++i) {
      const double ti = result.transmittance.data[i];
      for (int c = 0; c < 3; ++c) {
        const double r = srgb_to_linear(scene.rgb.data[3 * i + c]);
        const double v = srgb_to_linear(result.foggy.data[3 * i + c]);
        CHECK(std::fabs(v - r) <= (1.0 - ti) + 1e-9);  // |I - R| <= (1 - t) * 1 in linear
        dev += std::fabs(v - r);
      }
    }
    mean_dev[slot++] = dev / (3.0 * scene.rgb.pixel_count());
  }
  CHECK(mean_dev[0] < mean_dev[1]);
}

TEST_CASE("sub-fog beta rejected unless haze is allowed") {
  const testing::SyntheticScene scene = testing::make_scene(32, 24, 22);
  FogConfig fog;
  fog.beta = 0.001;
  CHECK_THROWS_AS(simulate_scene(scene.rgb, scene.disparity, scene.labels, scene.camera, fog,
                                 quick_completion(), FilterParams::with_sigmas(5, 8, 10)),
                  std::invalid_argument);
  fog.allow_haze = true;
  CHECK_NOTHROW(simulate_scene(scene.rgb, scene.disparity, scene.labels, scene.camera, fog,
                               quick_completion(), FilterParams::with_sigmas(5, 8, 10)));
}

}  // TEST_SUITE
