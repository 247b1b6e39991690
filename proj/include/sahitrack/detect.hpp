#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "sahitrack/geometry.hpp"
#include "sahitrack/slicing.hpp"

namespace sahitrack {

using Embedding = std::vector<double>;

struct Detection {
  BBox box{0, 0, 1, 1};
  double confidence = 1.0;
  // Unit-norm appearance feature; empty when the detector provides none.
  Embedding embedding;
  std::optional<int> source_region;

  bool has_embedding() const { return !embedding.empty(); }
};

// Per-region detector. Implementations return boxes in region-local
// coordinates and must tolerate concurrent calls on distinct regions.
class DetectorPort {
 public:
  virtual ~DetectorPort() = default;
  virtual std::vector<Detection> detect(const Region& region, int frame_id) const = 0;
};

struct DetectConfig {
  double nms_iou = 0.5;
  double min_confidence = 0.25;
};

// Translates a region-local detection into global coordinates. Throws
// std::invalid_argument when the local box escapes the region extent.
Detection lift_to_global(const Detection& local, const Region& region);

// Greedy NMS ordered by (confidence desc, x asc, y asc). A detection is kept
// iff its IoU with every already kept detection is below iou_threshold.
std::vector<Detection> nms_merge(std::vector<Detection> dets, double iou_threshold);

// Confidence filter followed by nms_merge.
std::vector<Detection> fuse_detections(std::vector<Detection> dets, const DetectConfig& cfg);

// Replays detections known in global coordinates for every frame. A region
// reports the detections whose box lies entirely inside it; truncated objects
// at slice borders are not reported by that slice.
class PrecomputedDetector : public DetectorPort {
 public:
  PrecomputedDetector() = default;
  explicit PrecomputedDetector(std::map<int, std::vector<Detection>> frames);

  std::vector<Detection> detect(const Region& region, int frame_id) const override;

  const std::map<int, std::vector<Detection>>& frames() const { return frames_; }

 private:
  std::map<int, std::vector<Detection>> frames_;
};

// Wraps another port and blocks for a fixed time per region call, standing in
// for the cost of running a network on one slice.
class DelayedDetector : public DetectorPort {
 public:
  DelayedDetector(std::shared_ptr<const DetectorPort> inner, std::chrono::microseconds per_call);

  std::vector<Detection> detect(const Region& region, int frame_id) const override;

 private:
  std::shared_ptr<const DetectorPort> inner_;
  std::chrono::microseconds per_call_;
};

}  // namespace sahitrack
