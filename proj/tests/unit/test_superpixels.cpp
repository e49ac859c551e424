#include "foghorn/superpixels.hpp"

#include "synthetic.hpp"

#include <doctest.h>

#include <set>
#include <vector>

using namespace foghorn;

namespace {

// Oracle: 4-connected component count per id must be 1.
bool ids_connected(const SuperpixelSegmentation& seg) {
  std::vector<char> visited(seg.ids.size(), 0);
  std::set<std::int32_t> seen;
  for (std::size_t start = 0; start < seg.ids.size(); ++start) {
    if (visited[start]) continue;
    const std::int32_t id = seg.ids[start];
    if (seen.count(id)) return false;  // second component of this id
    seen.insert(id);
    std::vector<std::size_t> stack{start};
    visited[start] = 1;
    while (!stack.empty()) {
      const std::size_t p = stack.back();
      stack.pop_back();
      const int x = static_cast<int>(p % seg.width), y = static_cast<int>(p / seg.width);
      const int nb[4][2] = {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}};
      for (const auto& q : nb) {
        if (q[0] < 0 || q[1] < 0 || q[0] >= seg.width || q[1] >= seg.height) continue;
        const std::size_t qi = static_cast<std::size_t>(q[1]) * seg.width + q[0];
        if (!visited[qi] && seg.ids[qi] == id) {
          visited[qi] = 1;
          stack.push_back(qi);
        }
      }
    }
  }
  return true;
}

}  // namespace

TEST_SUITE("superpixels") {

TEST_CASE("k = 1 yields a single superpixel") {
  const ImageLab img = testing::random_lab(32, 24, 5);
  const SuperpixelSegmentation seg = slic_superpixels(img, 1, 10.0);
  CHECK(seg.k == 1);
  for (const auto id : seg.ids) CHECK(id == 0);
}

TEST_CASE("uniform image, k = 4: four compact regions of balanced area") {
  ImageLab img(64, 64);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    img.data[3 * i] = 50.0;
    img.data[3 * i + 1] = 0.0;
    img.data[3 * i + 2] = 0.0;
  }
  const SuperpixelSegmentation seg = slic_superpixels(img, 4, 10.0);
  REQUIRE(seg.k == 4);
  std::vector<std::size_t> area(4, 0);
  for (const auto id : seg.ids) ++area[id];
  for (const auto a : area) {
    CHECK(a >= 1024 * 0.8);
    CHECK(a <= 1024 * 1.2);
  }
  CHECK(ids_connected(seg));
}

TEST_CASE("two-tone image, k = 2: boundary follows the tone edge") {
  // left half dark, right half bright; the color term dominates
  ImageLab img(64, 64);
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 64; ++x) {
      img.at(x, y, 0) = x < 32 ? 20.0 : 80.0;
      img.at(x, y, 1) = 0.0;
      img.at(x, y, 2) = 0.0;
    }
  }
  const SuperpixelSegmentation seg = slic_superpixels(img, 2, 10.0);
  REQUIRE(seg.k == 2);
  // Every pixel further than 2 px from the boundary must agree with its
  // half: assignment energy is dominated by the 60-unit L* gap.
  for (int y = 0; y < 64; ++y) {
    const std::int32_t left = seg.at(0, y);
    const std::int32_t right = seg.at(63, y);
    CHECK(left != right);
    for (int x = 0; x < 30; ++x) CHECK(seg.at(x, y) == left);
    for (int x = 34; x < 64; ++x) CHECK(seg.at(x, y) == right);
  }
}

TEST_CASE("every pixel assigned, ids dense, regions connected") {
  const ImageLab img = testing::random_lab(80, 48, 17);
  const SuperpixelSegmentation seg = slic_superpixels(img, 24, 10.0);
  CHECK(seg.k >= 1);
  CHECK(seg.k <= 24);
  std::set<std::int32_t> distinct;
  for (const auto id : seg.ids) {
    CHECK(id >= 0);
    CHECK(id < seg.k);
    distinct.insert(id);
  }
  CHECK(static_cast<int>(distinct.size()) == seg.k);
  CHECK(ids_connected(seg));
}

TEST_CASE("k out of range rejected") {
  const ImageLab img = testing::random_lab(8, 8, 3);
  CHECK_THROWS_AS(slic_superpixels(img, 0, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(slic_superpixels(img, 65, 10.0), std::invalid_argument);
}

TEST_CASE("deterministic across runs") {
  const ImageLab img = testing::random_lab(40, 40, 23);
  const SuperpixelSegmentation a = slic_superpixels(img, 12, 10.0);
  const SuperpixelSegmentation b = slic_superpixels(img, 12, 10.0);
  CHECK(a.ids == b.ids);
}

}  // TEST_SUITE
