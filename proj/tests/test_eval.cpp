#include <algorithm>
#include <cmath>
#include <iterator>
#include <sstream>

#include "doctest.h"
#include "eval_gen.hpp"
#include "json.hpp"
#include "roadhazard/error.hpp"
#include "roadhazard/eval_metrics.hpp"

namespace rh = roadhazard;
using rh::Category;
using doctest::Approx;

namespace {

rh::Detection det(rh::BBox b, double conf, rh::ImageId img = 1, Category c = Category::Pothole) {
  return {b, c, conf, img};
}

rh::GroundTruthBox gt(rh::BBox b, rh::ImageId img = 1, Category c = Category::Pothole) { return {img, b, c}; }

void check_against_oracle(const rhtest::EvalInstance& inst, rh::Interpolation interp) {
  rh::EvalOptions opts;
  opts.interp = interp;
  const auto rep = rh::evaluate(inst.dets, inst.gts, opts);
  const auto ora = oracle::evaluate(inst.odets, inst.ogts, 6, interp == rh::Interpolation::Point101);
  CHECK(std::abs(rep.all().precision - ora.all.p) <= 1e-9);
  CHECK(std::abs(rep.all().recall - ora.all.r) <= 1e-9);
  CHECK(std::abs(rep.all().ap50 - ora.all.ap50) <= 1e-9);
  CHECK(std::abs(rep.all().ap50_95 - ora.all.ap50_95) <= 1e-9);
  for (Category c : rh::kAllCategories) {
    const auto& row = rep.row(c);
    const auto& o = ora.categories[rh::category_index(c)];
    CHECK(row.included == o.included);
    CHECK(std::abs(row.precision - o.p) <= 1e-9);
    CHECK(std::abs(row.recall - o.r) <= 1e-9);
    CHECK(std::abs(row.ap50 - o.ap50) <= 1e-9);
    CHECK(std::abs(row.ap50_95 - o.ap50_95) <= 1e-9);
  }
}

}  // namespace

TEST_SUITE("eval_metrics") {
  TEST_CASE("matching examples") {
    // IoU 0.6: (0,0,10,10) vs (0,0,10,6)... area 60 / 100.
    const std::vector<rh::GroundTruthBox> g{gt({0, 0, 10, 10})};
    CHECK(rh::match_detections(std::vector{det({0, 0, 10, 6}, 0.9)}, g, 0.5) == std::vector<bool>{true});
    // Two near-identical detections, one box.
    const std::vector<rh::Detection> two{det({0, 0, 10, 9}, 0.8), det({0, 0, 10, 9}, 0.9)};
    CHECK(rh::match_detections(two, g, 0.5) == std::vector<bool>{false, true});
    // IoU 0.4.
    CHECK(rh::match_detections(std::vector{det({0, 0, 10, 4}, 0.9)}, g, 0.5) == std::vector<bool>{false});
  }

  TEST_CASE("matching prefers the highest IoU box") {
    const std::vector<rh::GroundTruthBox> g{gt({0, 0, 10, 10}), gt({2, 0, 12, 10})};
    const auto flags = rh::match_detections(std::vector{det({2, 0, 12, 10}, 0.9), det({0, 0, 10, 10}, 0.8)}, g, 0.5);
    CHECK(flags == std::vector<bool>{true, true});
  }

  TEST_CASE("average precision examples") {
    CHECK(rh::average_precision({true}, 1) == 1.0);
    CHECK(rh::average_precision({false}, 1) == 0.0);
    CHECK(std::abs(rh::average_precision({true, false, true}, 2) - 5.0 / 6.0) <= 1e-12);
    CHECK(rh::average_precision({}, 0) == 0.0);
    CHECK(rh::average_precision({}, 3) == 0.0);
    // 101-point on the same trace: recall 0..0.5 at precision 1 (51 points), 0.51..1 at 2/3 (50 points).
    CHECK(std::abs(rh::average_precision({true, false, true}, 2, rh::Interpolation::Point101) -
                   (51.0 + 50.0 * 2.0 / 3.0) / 101.0) <= 1e-12);
  }

  TEST_CASE("zero detections with ground truth") {
    const std::vector<rh::GroundTruthBox> g{gt({0, 0, 10, 10}), gt({20, 20, 30, 30}, 2)};
    const auto rep = rh::evaluate({}, g);
    const auto& row = rep.row(Category::Pothole);
    CHECK(row.ap50 == 0.0);
    CHECK(row.ap50_95 == 0.0);
    CHECK(row.recall == 0.0);
    CHECK(row.included);
  }

  TEST_CASE("perfect detector") {
    const std::vector<rh::GroundTruthBox> g{gt({0, 0, 10, 10}), gt({20, 20, 30, 30}, 2, Category::PineCone),
                                            gt({5, 5, 50, 50}, 3, Category::ManholeCover)};
    std::vector<rh::Detection> d;
    for (const auto& b : g) d.push_back(det(b.bbox, 1.0, b.image_id, b.category));
    const auto rep = rh::evaluate(d, g);
    for (const auto& row : rep.rows) {
      if (!row.included) continue;
      CHECK(row.precision == 1.0);
      CHECK(row.recall == 1.0);
      CHECK(row.ap50 == 1.0);
      CHECK(row.ap50_95 == 1.0);
    }
    CHECK(rep.all().ap50 == 1.0);
  }

  TEST_CASE("report shape") {
    const auto rep = rh::evaluate({}, std::vector{gt({0, 0, 10, 10})});
    REQUIRE(rep.rows.size() == 7);
    CHECK(rep.rows[0].name == "All");
    CHECK_FALSE(rep.rows[0].category.has_value());
    for (std::size_t i = 0; i < 6; ++i) CHECK(rep.rows[i + 1].category == rh::kAllCategories[i]);
    const auto table = rh::render_table(rep);
    const auto header = table.substr(0, table.find('\n'));
    std::istringstream cols(header);
    std::vector<std::string> names{std::istream_iterator<std::string>(cols), {}};
    CHECK(names == std::vector<std::string>{"Class", "Images", "Instances", "P", "R", "mAP50", "mAP50-95"});
    CHECK(std::count(table.begin(), table.end(), '\n') == 8);

    const auto j = nlohmann::json::parse(rh::render_json(rep));
    CHECK(j["interpolation"] == "allpoint");
    CHECK(j["rows"].size() == 7);
    CHECK(j["rows"][0]["class"] == "All");
    CHECK(j["rows"][4]["category_id"] == 3);
  }

  TEST_CASE("images count every image and instances sum") {
    rh::EvalOptions opts;
    opts.images = {1, 2, 3, 4};
    const std::vector<rh::GroundTruthBox> g{gt({0, 0, 10, 10}), gt({0, 0, 10, 10}, 2, Category::TreeBranch)};
    const auto rep = rh::evaluate({}, g, opts);
    std::size_t sum = 0;
    for (const auto& row : rep.rows) {
      CHECK(row.images == 4);
      if (row.category) sum += row.instances;
    }
    CHECK(rep.all().instances == sum);
    CHECK(sum == 2);
  }

  TEST_CASE("categories without boxes or detections stay out of the average") {
    const std::vector<rh::GroundTruthBox> g{gt({0, 0, 10, 10})};
    const auto rep = rh::evaluate(std::vector{det({0, 0, 10, 10}, 0.9)}, g);
    CHECK(rep.all().ap50 == 1.0);
    CHECK_FALSE(rep.row(Category::PineCone).included);
  }

  TEST_CASE("confidence ties are broken by image then input order") {
    // Same confidence: image 1 ranks ahead of image 2 regardless of input order.
    const std::vector<rh::GroundTruthBox> g{gt({0, 0, 10, 10}, 1)};
    const std::vector<rh::Detection> d{det({50, 50, 60, 60}, 0.5, 2), det({0, 0, 10, 10}, 0.5, 1)};
    // Ranked [TP (img 1), FP (img 2)] gives AP 1.
    CHECK(rh::evaluate(d, g).all().ap50 == 1.0);
  }

  TEST_CASE("matches the brute-force oracle on random instances") {
    rhtest::Gen gen(601);
    for (int i = 0; i < 300; ++i) {
      const auto inst = rhtest::random_instance(gen);
      check_against_oracle(inst, rh::Interpolation::AllPoint);
      check_against_oracle(inst, rh::Interpolation::Point101);
    }
  }

  TEST_CASE("metrics stay in range and ap50_95 <= ap50") {
    rhtest::Gen gen(602);
    for (int i = 0; i < 300; ++i) {
      const auto inst = rhtest::random_instance(gen);
      const auto rep = rh::evaluate(inst.dets, inst.gts);
      for (const auto& row : rep.rows) {
        for (double v : {row.precision, row.recall, row.ap50, row.ap50_95}) {
          CHECK(v >= 0.0);
          CHECK(v <= 1.0);
        }
        CHECK(row.ap50_95 <= row.ap50 + 1e-12);
      }
    }
  }

  TEST_CASE("AP depends only on confidence ranks") {
    rhtest::Gen gen(603);
    for (int i = 0; i < 200; ++i) {
      auto inst = rhtest::random_instance(gen);
      const auto before = rh::evaluate(inst.dets, inst.gts);
      for (auto& d : inst.dets) d.confidence = std::pow(d.confidence, 3.0) * 0.5;  // strictly increasing map
      const auto after = rh::evaluate(inst.dets, inst.gts);
      for (std::size_t r = 0; r < before.rows.size(); ++r) {
        CHECK(after.rows[r].ap50 == before.rows[r].ap50);
        CHECK(after.rows[r].ap50_95 == before.rows[r].ap50_95);
      }
    }
  }

  TEST_CASE("AP does not increase with the IoU threshold") {
    rhtest::Gen gen(604);
    for (int i = 0; i < 200; ++i) {
      const auto inst = rhtest::random_instance(gen);
      for (Category c : rh::kAllCategories) {
        double prev = 2.0;
        for (double t : rh::coco_iou_grid()) {
          rh::EvalOptions opts;
          opts.iou_grid = {t};
          const double ap = rh::evaluate(inst.dets, inst.gts, opts).row(c).ap50_95;
          CHECK(ap <= prev + 1e-12);
          prev = ap;
        }
      }
    }
  }

  TEST_CASE("a lower-confidence duplicate of a match never raises AP") {
    rhtest::Gen gen(605);
    for (int i = 0; i < 200; ++i) {
      auto inst = rhtest::random_instance(gen);
      if (inst.dets.empty()) continue;
      const auto before = rh::evaluate(inst.dets, inst.gts);
      auto dup = inst.dets[static_cast<std::size_t>(gen.integer(0, static_cast<int>(inst.dets.size()) - 1))];
      dup.confidence *= 0.5;
      inst.dets.push_back(dup);
      const auto after = rh::evaluate(inst.dets, inst.gts);
      for (std::size_t r = 1; r < before.rows.size(); ++r) CHECK(after.rows[r].ap50 <= before.rows[r].ap50 + 1e-12);
    }
  }

  TEST_CASE("invalid grid is rejected") {
    rh::EvalOptions opts;
    opts.iou_grid = {};
    try {
      rh::evaluate({}, {}, opts);
      FAIL("expected throw");
    } catch (const rh::Error& e) {
      CHECK(e.code() == rh::Errc::Config);
    }
  }
}
