#include "sahitrack/tracker.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "sahitrack/kernels.hpp"
#include "sahitrack/sim.hpp"

namespace sahitrack {

std::string_view to_string(TrackStatus s) {
  switch (s) {
    case TrackStatus::Tentative: return "tentative";
    case TrackStatus::Confirmed: return "confirmed";
    case TrackStatus::Lost: return "lost";
  }
  return "lost";
}

void TrackerConfig::validate() const {
  if (n_init < 1) throw std::invalid_argument("tracker.n_init must be >= 1");
  if (max_age < 1) throw std::invalid_argument("tracker.max_age must be >= 1");
  if (!(feature_decay >= 0.0 && feature_decay <= 1.0)) {
    throw std::invalid_argument("tracker.feature_decay must lie in [0, 1]");
  }
  assoc.validate();
}

Tracker::Tracker(TrackerConfig cfg)
    : cfg_(std::move(cfg)),
      grid_(cfg_.frame_w, cfg_.frame_h, cfg_.window_w, cfg_.window_h, cfg_.overlap),
      sampler_(cfg_.sampler) {
  cfg_.validate();
}

FrameOutput Tracker::step(int frame_id, const DetectorPort& detector) {
  if (last_frame_ && frame_id <= *last_frame_) {
    throw std::invalid_argument("frame " + std::to_string(frame_id) + " does not follow frame " +
                                std::to_string(*last_frame_));
  }
  last_frame_ = frame_id;
  const auto start = std::chrono::steady_clock::now();

  // 1. Motion prediction.
  for (Track& t : tracks_) {
    Prediction p = kf_predict(t.state, cfg_.kalman);
    t.state = std::move(p.state);
    t.predicted = p.box;
    ++t.age;
  }

  // 2. Candidate regions around the predictions, clamped into the frame.
  std::vector<Point> centers;
  centers.reserve(tracks_.size());
  const double max_x = std::nextafter(static_cast<double>(cfg_.frame_w), 0.0);
  const double max_y = std::nextafter(static_cast<double>(cfg_.frame_h), 0.0);
  for (const Track& t : tracks_) {
    const Point c = t.predicted.center();
    centers.push_back({std::clamp(c.x, 0.0, max_x), std::clamp(c.y, 0.0, max_y)});
  }
  const std::vector<Region> regions = sampler_.sample(grid_, centers);

  // 3. Per-region inference and fusion.
  std::vector<Detection> dets = cfg_.parallel_detect ? kernels::detect_regions_parallel(detector, regions, frame_id)
                                                     : kernels::detect_regions_serial(detector, regions, frame_id);
  dets = fuse_detections(std::move(dets), cfg_.detect);

  // 4. Association.
  std::vector<TrackView> views;
  views.reserve(tracks_.size());
  for (const Track& t : tracks_) views.push_back({t.id, t.predicted, t.history_box, t.feature});
  const MatchResult match = two_stage_match(views, dets, cfg_.assoc);

  // 5. Lifecycle.
  std::unordered_map<int, std::size_t> by_id;
  for (std::size_t i = 0; i < tracks_.size(); ++i) by_id[tracks_[i].id] = i;
  std::vector<char> matched(tracks_.size(), 0);
  std::vector<double> matched_conf(tracks_.size(), 0.0);
  for (const Match& m : match.matches) {
    const std::size_t i = by_id.at(m.track_id);
    Track& t = tracks_[i];
    const Detection& d = dets[static_cast<std::size_t>(m.detection_index)];
    t.state = kf_update(t.state, d.box, cfg_.kalman);
    t.history_box = d.box;
    if (d.has_embedding()) {
      if (t.feature.empty()) {
        t.feature = d.embedding;
      } else {
        for (std::size_t k = 0; k < t.feature.size(); ++k) {
          t.feature[k] = cfg_.feature_decay * t.feature[k] + (1.0 - cfg_.feature_decay) * d.embedding[k];
        }
        normalize(t.feature);
      }
    }
    ++t.hits;
    t.misses = 0;
    if (t.status == TrackStatus::Tentative && t.hits >= cfg_.n_init) t.status = TrackStatus::Confirmed;
    matched[i] = 1;
    matched_conf[i] = d.confidence;
  }
  for (std::size_t i = 0; i < tracks_.size(); ++i) {
    if (matched[i]) continue;
    if (++tracks_[i].misses > cfg_.max_age) tracks_[i].status = TrackStatus::Lost;
  }

  FrameOutput out;
  out.frame_id = frame_id;
  out.regions_processed = static_cast<int>(regions.size());
  out.detections = static_cast<int>(dets.size());
  for (std::size_t i = 0; i < tracks_.size(); ++i) {
    if (matched[i] && tracks_[i].status == TrackStatus::Confirmed) {
      out.tracks.push_back({tracks_[i].id, tracks_[i].history_box, TrackStatus::Confirmed, matched_conf[i]});
    }
  }
  lost_ += static_cast<int>(std::erase_if(tracks_, [](const Track& t) { return t.status == TrackStatus::Lost; }));

  for (int j : match.unmatched_detections) {
    const Detection& d = dets[static_cast<std::size_t>(j)];
    Track t;
    t.id = next_id_++;
    t.state = kf_init(d.box, cfg_.kalman);
    t.predicted = d.box;
    t.history_box = d.box;
    t.feature = d.embedding;
    t.hits = 1;
    t.status = cfg_.n_init <= 1 ? TrackStatus::Confirmed : TrackStatus::Tentative;
    if (t.status == TrackStatus::Confirmed) out.tracks.push_back({t.id, t.history_box, t.status, d.confidence});
    tracks_.push_back(std::move(t));
  }
  out.live_tracks = static_cast<int>(tracks_.size());

  out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

RunResult run_sequence(int n_frames, const DetectorPort& detector, const TrackerConfig& cfg) {
  Tracker tracker(cfg);
  RunResult r;
  r.frames.reserve(static_cast<std::size_t>(std::max(n_frames, 0)));
  const auto start = std::chrono::steady_clock::now();
  for (int f = 1; f <= n_frames; ++f) r.frames.push_back(tracker.step(f, detector));
  r.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.fps = r.total_seconds > 0.0 ? n_frames / r.total_seconds : 0.0;
  double regions = 0.0;
  for (const FrameOutput& f : r.frames) regions += f.regions_processed;
  r.regions_mean = r.frames.empty() ? 0.0 : regions / static_cast<double>(r.frames.size());
  return r;
}

Sequence to_sequence(const std::vector<FrameOutput>& frames) {
  Sequence seq;
  for (const FrameOutput& f : frames) {
    for (const TrackOutput& t : f.tracks) seq.push_back({f.frame_id, t.track_id, t.box, t.confidence});
  }
  return seq;
}

}  // namespace sahitrack
