#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "sahitrack/assoc.hpp"
#include "sahitrack/detect.hpp"
#include "sahitrack/motion.hpp"
#include "sahitrack/sequence.hpp"
#include "sahitrack/slicing.hpp"

namespace sahitrack {

enum class TrackStatus { Tentative, Confirmed, Lost };

std::string_view to_string(TrackStatus s);

struct Track {
  int id = 0;
  KalmanState state;
  BBox predicted{0, 0, 1, 1};
  // Box of the latest matched detection; frozen while the track goes unmatched.
  BBox history_box{0, 0, 1, 1};
  Embedding feature;
  TrackStatus status = TrackStatus::Tentative;
  int age = 0;
  int hits = 0;
  int misses = 0;
};

struct TrackerConfig {
  int frame_w = 4096;
  int frame_h = 2048;
  int window_w = 256;
  int window_h = 128;
  double overlap = 0.25;

  int n_init = 3;
  int max_age = 60;
  double feature_decay = 0.9;
  // Fan region inference out over OpenMP threads.
  bool parallel_detect = true;

  SamplerConfig sampler;
  AssociationConfig assoc;
  KalmanConfig kalman;
  DetectConfig detect;

  void validate() const;
};

struct TrackOutput {
  int track_id = 0;
  BBox box{0, 0, 1, 1};
  TrackStatus status = TrackStatus::Confirmed;
  double confidence = 1.0;
};

struct FrameOutput {
  int frame_id = 0;
  // Confirmed tracks matched in this frame, ascending id.
  std::vector<TrackOutput> tracks;
  int regions_processed = 0;
  int detections = 0;
  int live_tracks = 0;
  double wall_time = 0.0;
};

// Per-frame pipeline: predict, sample regions around predictions, detect on
// the sampled regions, associate, and maintain the track lifecycle.
class Tracker {
 public:
  explicit Tracker(TrackerConfig cfg);

  FrameOutput step(int frame_id, const DetectorPort& detector);

  const TrackerConfig& config() const { return cfg_; }
  const SliceGrid& grid() const { return grid_; }
  // Tentative and confirmed tracks, ascending id.
  const std::vector<Track>& live_tracks() const { return tracks_; }
  int lost_count() const { return lost_; }

 private:
  TrackerConfig cfg_;
  SliceGrid grid_;
  AdaptiveSampler sampler_;
  std::vector<Track> tracks_;
  std::optional<int> last_frame_;
  int next_id_ = 1;
  int lost_ = 0;
};

struct RunResult {
  std::vector<FrameOutput> frames;
  double total_seconds = 0.0;
  // frames / total wall time of the tracking loop.
  double fps = 0.0;
  double regions_mean = 0.0;
};

// Tracks frames 1..n_frames.
RunResult run_sequence(int n_frames, const DetectorPort& detector, const TrackerConfig& cfg);

// Tracking output as MOT rows.
Sequence to_sequence(const std::vector<FrameOutput>& frames);

}  // namespace sahitrack
