#pragma once

#include "sahitrack/sequence.hpp"

namespace sahitrack {

struct IdSwitch {
  int frame_id = 0;
  int gt_id = 0;
  int from_hyp = 0;
  int to_hyp = 0;
};

struct ClearMot {
  long fp = 0;
  long fn = 0;
  long idsw = 0;
  long matches = 0;
  long gt_total = 0;
  // 1 - (fp + fn + idsw) / gt_total; NaN when there is no ground truth.
  double mota = 0.0;
  std::vector<IdSwitch> switches;
};

// CLEAR-MOT accounting. Per frame, ground truth objects first keep the
// hypothesis they were last paired with when that pairing is still
// admissible (IoU >= iou_threshold); the rest are paired by an optimal
// assignment on 1 - IoU. A ground truth object paired with a different
// hypothesis than at its previous pairing counts as an identity switch.
ClearMot clear_mot(const Sequence& gt, const Sequence& hyp, double iou_threshold = 0.5);

struct IdentityScores {
  long idtp = 0;
  long idfp = 0;
  long idfn = 0;
  // 2 idtp / (2 idtp + idfp + idfn); NaN when both sequences are empty.
  double idf1 = 0.0;
};

// Identity F1 under the globally optimal one-to-one mapping between ground
// truth and hypothesis identities.
IdentityScores identity_scores(const Sequence& gt, const Sequence& hyp, double iou_threshold = 0.5);

double idf1(const Sequence& gt, const Sequence& hyp, double iou_threshold = 0.5);

struct EvalReport {
  long fp = 0;
  long fn = 0;
  long idsw = 0;
  long gt_total = 0;
  double mota = 0.0;
  double idf1 = 0.0;
  double fps = 0.0;
  double regions_mean = 0.0;
  double iou_threshold = 0.5;
};

EvalReport evaluate(const Sequence& gt, const Sequence& hyp, double iou_threshold = 0.5);

}  // namespace sahitrack
