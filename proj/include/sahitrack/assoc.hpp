#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sahitrack/assignment.hpp"
#include "sahitrack/detect.hpp"
#include "sahitrack/geometry.hpp"

namespace sahitrack {

// Order of the two association stages. The "only" variants run a single
// stage.
enum class StageOrder { LocationFirst, AppearanceFirst, LocationOnly, AppearanceOnly };

std::string_view to_string(StageOrder order);
StageOrder parse_stage_order(std::string_view text);

struct AssociationConfig {
  double w_pred = 0.2;
  double w_hist = 0.8;
  // Minimum DH-DIoU for a location match.
  double stage1_min_similarity = -0.5;
  // Minimum cosine similarity for an appearance match.
  double stage2_min_cosine = 0.6;
  StageOrder stage_order = StageOrder::LocationFirst;
  // Use the OpenMP similarity kernels.
  bool parallel = true;

  // Throws std::invalid_argument unless both weights lie in [0, 1] and sum to 1.
  void validate() const;
};

// Weighted sum of DIoU against the Kalman-predicted box and DIoU against the
// track's latest matched detection.
double dh_diou(const BBox& det, const BBox& predicted, const BBox& history, const AssociationConfig& cfg);

// Dot product of unit-norm features; throws on dimension mismatch.
double cosine_similarity(const Embedding& a, const Embedding& b);

struct TrackView {
  int track_id = 0;
  BBox predicted{0, 0, 1, 1};
  BBox history{0, 0, 1, 1};
  Embedding feature;
};

enum class MatchKind { Location, Appearance };

struct Match {
  int track_id = 0;
  int detection_index = 0;
  int stage = 1;
  MatchKind kind = MatchKind::Location;
};

struct MatchResult {
  std::vector<Match> matches;
  std::vector<int> unmatched_tracks;
  std::vector<int> unmatched_detections;
};

// Two-stage cascade: each stage solves an optimal assignment on similarity
// complements (1 - s) over what the previous stage left unmatched.
MatchResult two_stage_match(const std::vector<TrackView>& tracks, const std::vector<Detection>& detections,
                            const AssociationConfig& cfg);

}  // namespace sahitrack
