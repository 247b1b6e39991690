#include "sahitrack/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace sahitrack {
namespace {

LabeledBox lb(int frame, int id, double x, double y = 0.0) { return {frame, id, BBox(x, y, 10, 20), 1.0}; }

// Two birds over five frames: two misses, one spurious box and one switch.
void hand_fixture(Sequence& gt, Sequence& hyp) {
  for (int f = 1; f <= 5; ++f) {
    gt.push_back(lb(f, 1, 0));
    gt.push_back(lb(f, 2, 100));
  }
  hyp = {lb(1, 1, 0), lb(1, 2, 100), lb(2, 1, 1), lb(2, 2, 101), lb(3, 2, 100),
         lb(4, 3, 0), lb(5, 3, 0), lb(5, 2, 100), lb(5, 9, 500)};
}

TEST(ClearMotTest, Perfect) {
  Sequence gt, hyp;
  for (int f = 1; f <= 4; ++f) {
    gt.push_back(lb(f, 1, 10.0 * f));
    gt.push_back(lb(f, 2, 300));
    hyp.push_back(lb(f, 40, 10.0 * f));
    hyp.push_back(lb(f, 41, 300));
  }
  const ClearMot c = clear_mot(gt, hyp);
  EXPECT_EQ(c.fp, 0);
  EXPECT_EQ(c.fn, 0);
  EXPECT_EQ(c.idsw, 0);
  EXPECT_DOUBLE_EQ(c.mota, 1.0);
}

TEST(ClearMotTest, HandCountedFixture) {
  Sequence gt, hyp;
  hand_fixture(gt, hyp);
  const ClearMot c = clear_mot(gt, hyp);
  EXPECT_EQ(c.gt_total, 10);
  EXPECT_EQ(c.fn, 2);
  EXPECT_EQ(c.fp, 1);
  EXPECT_EQ(c.idsw, 1);
  EXPECT_DOUBLE_EQ(c.mota, 0.6);
  ASSERT_EQ(c.switches.size(), 1u);
  EXPECT_EQ(c.switches[0].frame_id, 4);
  EXPECT_EQ(c.switches[0].gt_id, 1);
  EXPECT_EQ(c.switches[0].from_hyp, 1);
  EXPECT_EQ(c.switches[0].to_hyp, 3);
}

TEST(ClearMotTest, EmptyHypothesis) {
  Sequence gt, hyp;
  hand_fixture(gt, hyp);
  const ClearMot c = clear_mot(gt, {});
  EXPECT_EQ(c.fn, 10);
  EXPECT_DOUBLE_EQ(c.mota, 0.0);
  EXPECT_TRUE(std::isnan(clear_mot({}, hyp).mota));
}

TEST(ClearMotTest, ContinuationBeatsBetterOverlap) {
  // Frame 2: hyp 7 still overlaps enough, hyp 8 overlaps better. No switch.
  const Sequence gt{lb(1, 1, 0), lb(2, 1, 0)};
  const Sequence hyp{lb(1, 7, 0), lb(2, 7, 3), lb(2, 8, 0)};
  const ClearMot c = clear_mot(gt, hyp);
  EXPECT_EQ(c.idsw, 0);
  EXPECT_EQ(c.fp, 1);
}

TEST(ClearMotTest, RejectsDuplicateIds) {
  EXPECT_THROW(clear_mot({lb(1, 1, 0), lb(1, 1, 50)}, {}), std::invalid_argument);
}

TEST(Idf1Test, Examples) {
  Sequence gt, hyp, relabeled, first, second;
  for (int f = 1; f <= 100; ++f) {
    gt.push_back(lb(f, 1, f));
    relabeled.push_back(lb(f, 77, f));
    (f <= 50 ? first : second).push_back(lb(f, f <= 50 ? 10 : 11, f));
  }
  EXPECT_DOUBLE_EQ(idf1(gt, relabeled), 1.0);
  Sequence split = first;
  split.insert(split.end(), second.begin(), second.end());
  const IdentityScores s = identity_scores(gt, split);
  EXPECT_EQ(s.idtp, 50);
  EXPECT_EQ(s.idfp, 50);
  EXPECT_EQ(s.idfn, 50);
  EXPECT_DOUBLE_EQ(s.idf1, 0.5);
  EXPECT_DOUBLE_EQ(idf1(gt, {}), 0.0);
  EXPECT_TRUE(std::isnan(idf1({}, {})));
}

TEST(EvaluateTest, HandFixture) {
  Sequence gt, hyp;
  hand_fixture(gt, hyp);
  const EvalReport r = evaluate(gt, hyp);
  EXPECT_DOUBLE_EQ(r.mota, 0.6);
  EXPECT_EQ(r.fp + r.fn + r.idsw, 4);
  EXPECT_DOUBLE_EQ(r.iou_threshold, 0.5);
}

TEST(MetricsOracle, RandomSmallInstances) {
  std::mt19937_64 rng(2024);
  long total_switches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Sequence gt, hyp;
    oracle::random_instance(rng, gt, hyp);
    const ClearMot c = clear_mot(gt, hyp, 0.5);
    const oracle::ClearCounts o = oracle::clear_mot(gt, hyp, 0.5);
    ASSERT_EQ(c.fp, o.fp) << "trial " << trial;
    ASSERT_EQ(c.fn, o.fn) << "trial " << trial;
    ASSERT_EQ(c.idsw, o.idsw) << "trial " << trial;
    ASSERT_EQ(c.gt_total, o.gt_total);
    ASSERT_NEAR(c.mota, 1.0 - static_cast<double>(c.fp + c.fn + c.idsw) / static_cast<double>(c.gt_total), 1e-12);
    ASSERT_DOUBLE_EQ(idf1(gt, hyp, 0.5), oracle::idf1(gt, hyp, 0.5)) << "trial " << trial;
    total_switches += c.idsw;
  }
  EXPECT_GT(total_switches, 0);  // the generator exercises switches
}

TEST(MetricsProperty, RelabelInvariance) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    Sequence gt, hyp;
    oracle::random_instance(rng, gt, hyp);
    Sequence relabeled = hyp;
    for (auto& b : relabeled) b.object_id = 1000 - 3 * b.object_id;
    const ClearMot a = clear_mot(gt, hyp), b = clear_mot(gt, relabeled);
    EXPECT_EQ(a.fp, b.fp);
    EXPECT_EQ(a.fn, b.fn);
    EXPECT_EQ(a.idsw, b.idsw);
    EXPECT_DOUBLE_EQ(idf1(gt, hyp), idf1(gt, relabeled));
  }
}

TEST(MetricsProperty, PureFalsePositiveNeverRaisesMota) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> frame(1, 20);
  for (int trial = 0; trial < 50; ++trial) {
    Sequence gt, hyp;
    oracle::random_instance(rng, gt, hyp);
    const double before = clear_mot(gt, hyp).mota;
    hyp.push_back({frame(rng), 500, BBox(900, 900, 10, 20), 1.0});
    EXPECT_LE(clear_mot(gt, hyp).mota, before);
  }
}

}  // namespace
}  // namespace sahitrack
