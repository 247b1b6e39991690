#include "sahitrack/detect.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace sahitrack {
namespace {

constexpr double kEdgeTolerance = 1e-9;

bool inside(const BBox& b, const BBox& outer) {
  return b.x() >= outer.x() - kEdgeTolerance && b.y() >= outer.y() - kEdgeTolerance &&
         b.right() <= outer.right() + kEdgeTolerance && b.bottom() <= outer.bottom() + kEdgeTolerance;
}

}  // namespace

Detection lift_to_global(const Detection& local, const Region& region) {
  const BBox local_extent(0.0, 0.0, region.box.w(), region.box.h());
  if (!inside(local.box, local_extent)) {
    std::ostringstream msg;
    msg << "detector returned " << local.box << " outside region " << region.index << " of size "
        << region.box.w() << "x" << region.box.h();
    throw std::invalid_argument(msg.str());
  }
  Detection out = local;
  out.box = local.box.translated(region.box.x(), region.box.y());
  out.source_region = region.index;
  return out;
}

std::vector<Detection> nms_merge(std::vector<Detection> dets, double iou_threshold) {
  std::stable_sort(dets.begin(), dets.end(), [](const Detection& a, const Detection& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.box.x() != b.box.x()) return a.box.x() < b.box.x();
    return a.box.y() < b.box.y();
  });
  std::vector<Detection> kept;
  kept.reserve(dets.size());
  for (auto& d : dets) {
    const bool suppressed = std::any_of(kept.begin(), kept.end(),
                                        [&](const Detection& k) { return iou(k.box, d.box) >= iou_threshold; });
    if (!suppressed) kept.push_back(std::move(d));
  }
  return kept;
}

std::vector<Detection> fuse_detections(std::vector<Detection> dets, const DetectConfig& cfg) {
  std::erase_if(dets, [&](const Detection& d) { return d.confidence < cfg.min_confidence; });
  return nms_merge(std::move(dets), cfg.nms_iou);
}

PrecomputedDetector::PrecomputedDetector(std::map<int, std::vector<Detection>> frames)
    : frames_(std::move(frames)) {}

std::vector<Detection> PrecomputedDetector::detect(const Region& region, int frame_id) const {
  std::vector<Detection> out;
  const auto it = frames_.find(frame_id);
  if (it == frames_.end()) return out;
  for (const Detection& d : it->second) {
    if (!inside(d.box, region.box)) continue;
    Detection local = d;
    local.box = d.box.translated(-region.box.x(), -region.box.y());
    local.source_region.reset();
    out.push_back(std::move(local));
  }
  return out;
}

DelayedDetector::DelayedDetector(std::shared_ptr<const DetectorPort> inner, std::chrono::microseconds per_call)
    : inner_(std::move(inner)), per_call_(per_call) {}

std::vector<Detection> DelayedDetector::detect(const Region& region, int frame_id) const {
  std::this_thread::sleep_for(per_call_);
  return inner_->detect(region, frame_id);
}

}  // namespace sahitrack
