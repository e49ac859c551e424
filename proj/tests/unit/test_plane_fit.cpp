#include "foghorn/plane_fit.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

using namespace foghorn;

namespace {

std::vector<DepthSample> plane_points(double a, double b, double c, int nx, int ny) {
  std::vector<DepthSample> pts;
  for (int y = 0; y < ny; ++y) {
    for (int x = 0; x < nx; ++x) {
      pts.push_back({static_cast<double>(x), static_cast<double>(y), a * x + b * y + c});
    }
  }
  return pts;
}

}  // namespace

TEST_SUITE("plane_fit") {

TEST_CASE("noiseless points recover the exact plane") {
  const auto pts = plane_points(2.0, 3.0, 5.0, 8, 8);
  const Plane p = fit_plane_ransac(pts, 50, 0.1, 42);
  CHECK(std::fabs(p.a - 2.0) < 1e-9);
  CHECK(std::fabs(p.b - 3.0) < 1e-9);
  CHECK(std::fabs(p.c - 5.0) < 1e-9);
}

TEST_CASE("30% uniform outliers are rejected") {
  auto pts = plane_points(2.0, 3.0, 5.0, 10, 10);
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> noise(0.0, 100.0);
  std::vector<std::size_t> order(pts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), gen);
  const std::size_t outliers = pts.size() * 3 / 10;
  for (std::size_t i = 0; i < outliers; ++i) {
    DepthSample& s = pts[order[i]];
    // resample draws that land inside the inlier band, so every outlier
    // is genuinely off-plane and must be excluded by the fit
    do {
      s.depth = noise(gen);
    } while (std::fabs(s.depth - (2.0 * s.x + 3.0 * s.y + 5.0)) <= 0.2);
  }

  const Plane p = fit_plane_ransac(pts, 500, 0.1, 7);
  CHECK(std::fabs(p.a - 2.0) < 1e-3);
  CHECK(std::fabs(p.b - 3.0) < 1e-3);
  CHECK(std::fabs(p.c - 5.0) < 1e-3);
  // every outlier sits outside the tolerance band of the fitted plane
  for (std::size_t i = 0; i < outliers; ++i) {
    const auto& s = pts[order[i]];
    CHECK(std::fabs(p.eval(s.x, s.y) - s.depth) > 0.1);
  }
}

TEST_CASE("fewer than 3 points is an error") {
  std::vector<DepthSample> two = {{0, 0, 1}, {1, 0, 2}};
  CHECK_THROWS_AS(fit_plane_ransac(two, 10, 0.1, 1), std::invalid_argument);
  CHECK_THROWS_AS(fit_plane_least_squares(two), std::invalid_argument);
}

TEST_CASE("collinear samples fail after the iteration budget") {
  std::vector<DepthSample> line;
  for (int i = 0; i < 10; ++i) line.push_back({static_cast<double>(i), 2.0 * i, 1.0});
  CHECK_THROWS_AS(fit_plane_ransac(line, 25, 0.1, 3), std::runtime_error);
}

TEST_CASE("deterministic for a fixed seed") {
  auto pts = plane_points(0.5, -0.25, 40.0, 12, 12);
  std::mt19937_64 gen(77);
  std::normal_distribution<double> jitter(0.0, 0.02);
  for (auto& s : pts) s.depth += jitter(gen);
  const Plane p1 = fit_plane_ransac(pts, 200, 0.1, 123);
  const Plane p2 = fit_plane_ransac(pts, 200, 0.1, 123);
  CHECK(p1.a == p2.a);
  CHECK(p1.b == p2.b);
  CHECK(p1.c == p2.c);
}

TEST_CASE("least squares on an exact plane interpolates") {
  const auto pts = plane_points(-1.5, 0.75, 12.0, 5, 5);
  const Plane p = fit_plane_least_squares(pts);
  CHECK(std::fabs(p.a + 1.5) < 1e-9);
  CHECK(std::fabs(p.b - 0.75) < 1e-9);
  CHECK(std::fabs(p.c - 12.0) < 1e-9);
}

}  // TEST_SUITE
