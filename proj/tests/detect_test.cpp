#include "sahitrack/detect.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "sahitrack/slicing.hpp"

namespace sahitrack {
namespace {

Detection det(double x, double y, double w, double h, double conf) {
  Detection d;
  d.box = BBox(x, y, w, h);
  d.confidence = conf;
  return d;
}

TEST(LiftTest, Examples) {
  const Region r{7, BBox(192, 96, 256, 128)};
  const Detection g = lift_to_global(det(10, 5, 12, 20, 0.9), r);
  EXPECT_EQ(g.box, BBox(202, 101, 12, 20));
  EXPECT_EQ(g.source_region, 7);

  const Region origin{0, BBox(0, 0, 256, 128)};
  EXPECT_EQ(lift_to_global(det(3, 4, 5, 6, 1.0), origin).box, BBox(3, 4, 5, 6));
  EXPECT_THROW(lift_to_global(det(250, 5, 12, 20, 1.0), r), std::invalid_argument);
  EXPECT_THROW(lift_to_global(det(-1, 5, 12, 20, 1.0), r), std::invalid_argument);
}

TEST(LiftTest, RoundTripIsExact) {
  std::mt19937_64 rng(4);
  // Multiples of 1/64 so every sum is representable.
  std::uniform_int_distribution<int> start(0, 4000), q(0, 64 * 60), qs(64, 64 * 50);
  auto pos = [&](std::mt19937_64& g) { return q(g) / 64.0; };
  auto size = [&](std::mt19937_64& g) { return qs(g) / 64.0; };
  for (int i = 0; i < 1000; ++i) {
    const Region r{0, BBox(start(rng) * 0.75, start(rng) * 0.75, 256, 128)};
    const Detection local = det(pos(rng), pos(rng), size(rng), size(rng), 0.5);
    if (local.box.right() > 256 || local.box.bottom() > 128) continue;
    const Detection g = lift_to_global(local, r);
    ASSERT_EQ(g.box.translated(-r.box.x(), -r.box.y()), local.box);
  }
}

TEST(NmsTest, Examples) {
  EXPECT_TRUE(nms_merge({}, 0.5).empty());

  // Two copies of one bird with IoU 0.9.
  const BBox a(0, 0, 10, 20);
  const BBox b(0, 0, 10, 18);
  ASSERT_NEAR(iou(a, b), 0.9, 1e-12);
  Detection lo = det(0, 0, 10, 18, 0.8);
  Detection hi = det(0, 0, 10, 20, 0.9);
  const auto kept = nms_merge({lo, hi}, 0.5);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_DOUBLE_EQ(kept[0].confidence, 0.9);
  EXPECT_EQ(kept[0].box, a);

  EXPECT_EQ(nms_merge({det(0, 0, 5, 5, 0.5), det(50, 0, 5, 5, 0.6)}, 0.5).size(), 2u);
}

TEST(NmsTest, TieBreakByPosition) {
  const auto kept = nms_merge({det(1, 0, 10, 10, 0.7), det(0, 0, 10, 10, 0.7)}, 0.5);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_DOUBLE_EQ(kept[0].box.x(), 0.0);
}

TEST(NmsProperty, RandomClusters) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> pos(0, 60), size(4, 20), conf(0, 1);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Detection> in;
    for (int i = 0; i < 12; ++i) in.push_back(det(pos(rng), pos(rng), size(rng), size(rng), conf(rng)));
    const auto out = nms_merge(in, 0.4);
    std::vector<Detection> shuffled = in;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto again = nms_merge(shuffled, 0.4);
    ASSERT_EQ(out.size(), again.size());
    for (std::size_t i = 0; i < out.size(); ++i) ASSERT_EQ(out[i].box, again[i].box);

    for (const Detection& o : out) {
      ASSERT_TRUE(std::any_of(in.begin(), in.end(), [&](const Detection& d) { return d.box == o.box; }));
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (std::size_t j = i + 1; j < out.size(); ++j) ASSERT_LT(iou(out[i].box, out[j].box), 0.4);
    }
    // Every suppressed detection overlaps a kept one of at least its confidence.
    for (const Detection& d : in) {
      bool covered = false;
      for (const Detection& o : out) covered |= iou(d.box, o.box) >= 0.4 && o.confidence >= d.confidence;
      ASSERT_TRUE(covered);
    }
  }
}

TEST(FuseTest, DropsLowConfidence) {
  DetectConfig cfg;
  const auto out = fuse_detections({det(0, 0, 5, 5, 0.2), det(50, 0, 5, 5, 0.3)}, cfg);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_DOUBLE_EQ(out[0].confidence, 0.3);
}

TEST(PrecomputedDetectorTest, ReportsBoxesInsideRegionInLocalCoordinates) {
  std::map<int, std::vector<Detection>> frames;
  frames[1] = {det(202, 101, 12, 20, 0.9), det(440, 100, 12, 20, 0.9), det(1000, 1000, 5, 5, 0.9)};
  const PrecomputedDetector port(frames);
  const Region r{3, BBox(192, 96, 256, 128)};
  const auto out = port.detect(r, 1);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].box, BBox(10, 5, 12, 20));
  EXPECT_TRUE(port.detect(r, 2).empty());
  for (const Detection& d : out) {
    EXPECT_GE(d.box.x(), 0);
    EXPECT_LE(d.box.right(), r.box.w());
  }
}

TEST(DelayedDetectorTest, SleepsPerCall) {
  auto inner = std::make_shared<PrecomputedDetector>();
  const DelayedDetector port(inner, std::chrono::microseconds(2000));
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < 5; ++i) port.detect(Region{0, BBox(0, 0, 10, 10)}, 1);
  EXPECT_GE(std::chrono::steady_clock::now() - t0, std::chrono::milliseconds(10));
}

}  // namespace
}  // namespace sahitrack
