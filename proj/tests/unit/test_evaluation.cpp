#include "foghorn/evaluation.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace foghorn;

namespace {

SemanticLabeling make_labels(int w, int h, int classes, const std::vector<std::int32_t>& ids) {
  SemanticLabeling l(w, h, classes);
  l.class_ids = ids;
  return l;
}

// Set-operation oracle over non-void ground-truth pixels.
double set_mean_iou(const SemanticLabeling& gt, const SemanticLabeling& pred, int classes) {
  double sum = 0;
  int included = 0;
  for (int c = 1; c <= classes; ++c) {
    std::uint64_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < gt.class_ids.size(); ++i) {
      if (gt.class_ids[i] == kVoidLabel) continue;
      const bool in_gt = gt.class_ids[i] == c;
      const bool in_pred = pred.class_ids[i] == c;
      tp += in_gt && in_pred;
      fp += !in_gt && in_pred;
      fn += in_gt && !in_pred;
    }
    const std::uint64_t uni = tp + fp + fn;
    if (uni == 0) continue;
    sum += 100.0 * static_cast<double>(tp) / static_cast<double>(uni);
    ++included;
  }
  return sum / included;
}

}  // namespace

TEST_SUITE("evaluation") {

TEST_CASE("perfect prediction scores 100") {
  const auto gt = make_labels(4, 4, 3, {1, 1, 2, 2, 1, 3, 3, 2, 1, 1, 2, 3, 3, 3, 2, 1});
  ConfusionMatrix cm(3);
  accumulate(cm, gt, gt);
  CHECK(cm.total() == 16);
  std::uint64_t diagonal = 0;
  for (int c = 1; c <= 3; ++c) diagonal += cm.at(c, c);
  CHECK(diagonal == 16);
  const IouReport report = mean_iou(cm);
  CHECK(report.mean_percent == doctest::Approx(100.0));
}

TEST_CASE("void ground truth contributes nothing") {
  const auto gt = make_labels(2, 2, 3, {0, 0, 0, 0});
  const auto pred = make_labels(2, 2, 3, {1, 2, 3, 1});
  ConfusionMatrix cm(3);
  accumulate(cm, gt, pred);
  CHECK(cm.total() == 0);
}

TEST_CASE("hand-built 2x2 case") {
  const int road = 1, sky = 11, car = 14;
  const auto gt = make_labels(2, 2, 19, {road, road, sky, kVoidLabel});
  const auto pred = make_labels(2, 2, 19, {road, sky, sky, car});
  ConfusionMatrix cm(19);
  accumulate(cm, gt, pred);
  CHECK(cm.at(road, road) == 1);
  CHECK(cm.at(road, sky) == 1);
  CHECK(cm.at(sky, sky) == 1);
  CHECK(cm.total() == 3);
}

TEST_CASE("pairwise-swapped prediction scores 0") {
  const auto gt = make_labels(4, 2, 2, {1, 1, 1, 1, 2, 2, 2, 2});
  const auto pred = make_labels(4, 2, 2, {2, 2, 2, 2, 1, 1, 1, 1});
  ConfusionMatrix cm(2);
  accumulate(cm, gt, pred);
  const IouReport report = mean_iou(cm);
  CHECK(report.mean_percent == doctest::Approx(0.0));
}

TEST_CASE("matches the set-operation oracle on random instances") {
  std::mt19937_64 gen(9);
  std::uniform_int_distribution<int> gt_id(0, 3);  // includes void
  std::uniform_int_distribution<int> pred_id(1, 3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::int32_t> gt_ids(64), pred_ids(64);
    for (auto& v : gt_ids) v = gt_id(gen);
    for (auto& v : pred_ids) v = pred_id(gen);
    const auto gt = make_labels(8, 8, 3, gt_ids);
    const auto pred = make_labels(8, 8, 3, pred_ids);
    if (std::all_of(gt_ids.begin(), gt_ids.end(),
                    [](std::int32_t v) { return v == kVoidLabel; })) {
      continue;
    }
    ConfusionMatrix cm(3);
    accumulate(cm, gt, pred);
    const IouReport report = mean_iou(cm);
    CHECK(std::fabs(report.mean_percent - set_mean_iou(gt, pred, 3)) < 1e-12);
  }
}

TEST_CASE("pixel order does not matter") {
  std::mt19937_64 gen(10);
  std::vector<std::int32_t> gt_ids(64), pred_ids(64);
  std::uniform_int_distribution<int> id(1, 3);
  for (auto& v : gt_ids) v = id(gen);
  for (auto& v : pred_ids) v = id(gen);

  ConfusionMatrix a(3);
  accumulate(a, make_labels(8, 8, 3, gt_ids), make_labels(8, 8, 3, pred_ids));

  std::vector<std::size_t> perm(64);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), gen);
  std::vector<std::int32_t> gt_p(64), pred_p(64);
  for (std::size_t i = 0; i < 64; ++i) {
    gt_p[i] = gt_ids[perm[i]];
    pred_p[i] = pred_ids[perm[i]];
  }
  ConfusionMatrix b(3);
  accumulate(b, make_labels(8, 8, 3, gt_p), make_labels(8, 8, 3, pred_p));
  CHECK(a.counts == b.counts);
}

TEST_CASE("adding void pixels never changes the result") {
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<int> id(1, 3);
  std::vector<std::int32_t> gt_ids(36), pred_ids(36);
  for (auto& v : gt_ids) v = id(gen);
  for (auto& v : pred_ids) v = id(gen);
  ConfusionMatrix base(3);
  accumulate(base, make_labels(6, 6, 3, gt_ids), make_labels(6, 6, 3, pred_ids));
  const double reference = mean_iou(base).mean_percent;

  auto gt_with_void = gt_ids;
  for (std::size_t i = 0; i < gt_with_void.size(); i += 3) gt_with_void[i] = kVoidLabel;
  ConfusionMatrix padded(3);
  accumulate(padded, make_labels(6, 6, 3, gt_with_void), make_labels(6, 6, 3, pred_ids));
  // manually add back what the voided pixels contributed
  for (std::size_t i = 0; i < gt_with_void.size(); i += 3) {
    ++padded.at(gt_ids[i], pred_ids[i]);
  }
  CHECK(padded.counts == base.counts);
  CHECK(mean_iou(padded).mean_percent == doctest::Approx(reference).epsilon(1e-15));
}

TEST_CASE("frequent-class subset restricts the mean") {
  ConfusionMatrix cm(19);
  cm.at(1, 1) = 80;
  cm.at(1, 2) = 20;   // road: IoU 80/100
  cm.at(10, 10) = 50; // terrain: IoU 100% but not frequent
  const ClassDefinitions defs = ClassDefinitions::cityscapes();
  REQUIRE(defs.frequent_ids.size() == 11);

  const IouReport all = mean_iou(cm);
  const IouReport frequent = mean_iou(cm, &defs.frequent_ids);
  // all: road 80/100 -> 80%... sidewalk has FP 20 -> 0%, terrain 100%
  CHECK(all.included_classes == 3);
  CHECK(frequent.included_classes == 2);  // road and sidewalk; terrain excluded
  CHECK(frequent.mean_percent == doctest::Approx((80.0 + 0.0) / 2));
  CHECK(all.mean_percent == doctest::Approx((80.0 + 0.0 + 100.0) / 3));
}

TEST_CASE("classes absent everywhere are excluded from the mean") {
  ConfusionMatrix cm(5);
  cm.at(1, 1) = 10;
  cm.at(2, 2) = 10;
  const IouReport report = mean_iou(cm);
  CHECK(report.included_classes == 2);
  CHECK(report.mean_percent == doctest::Approx(100.0));
  CHECK(!report.per_class_percent[2].has_value());
}

TEST_CASE("error paths") {
  const auto gt = make_labels(2, 2, 3, {1, 1, 2, 2});

  SUBCASE("dimension mismatch") {
    const auto pred = make_labels(2, 1, 3, {1, 1});
    ConfusionMatrix cm(3);
    CHECK_THROWS_AS(accumulate(cm, gt, pred), std::invalid_argument);
  }
  SUBCASE("void in prediction") {
    const auto pred = make_labels(2, 2, 3, {1, kVoidLabel, 2, 2});
    ConfusionMatrix cm(3);
    CHECK_THROWS_AS(accumulate(cm, gt, pred), std::invalid_argument);
  }
  SUBCASE("out-of-range id") {
    const auto pred = make_labels(2, 2, 3, {1, 9, 2, 2});
    ConfusionMatrix cm(3);
    CHECK_THROWS_AS(accumulate(cm, gt, pred), std::invalid_argument);
  }
  SUBCASE("empty matrix") {
    ConfusionMatrix cm(3);
    CHECK_THROWS_AS(mean_iou(cm), std::invalid_argument);
  }
}

TEST_CASE("class definitions parse from JSON") {
  const char* text = R"({
    "classes": [{"id": 1, "name": "water"}, {"id": 2, "name": "land"},
                {"id": 3, "name": "boat"}],
    "frequent": ["water", "land"]
  })";
  const ClassDefinitions defs = parse_class_definitions(text);
  CHECK(defs.class_count() == 3);
  CHECK(defs.name_of(3) == "boat");
  REQUIRE(defs.frequent_ids.size() == 2);
  CHECK(defs.frequent_ids[0] == 1);

  CHECK_THROWS(parse_class_definitions(R"({"classes": [{"id": 2, "name": "skip"}]})"));
  CHECK_THROWS(parse_class_definitions(
      R"({"classes": [{"id": 1, "name": "a"}], "frequent": ["nope"]})"));
}

TEST_CASE("cityscapes definitions carry the frequent set") {
  const ClassDefinitions defs = ClassDefinitions::cityscapes();
  CHECK(defs.class_count() == 19);
  const std::vector<std::string> expected = {"road", "sidewalk", "building", "wall",
                                             "fence", "pole", "traffic light", "traffic sign",
                                             "vegetation", "sky", "car"};
  REQUIRE(defs.frequent_ids.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(defs.name_of(defs.frequent_ids[i]) == expected[i]);
  }
}

}  // TEST_SUITE
