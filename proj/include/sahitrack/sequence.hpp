#pragma once

#include <map>
#include <vector>

#include "sahitrack/geometry.hpp"

namespace sahitrack {

// One annotated or hypothesised box: the row type of MOT text files.
struct LabeledBox {
  int frame_id = 0;
  int object_id = 0;
  BBox box{0, 0, 1, 1};
  double confidence = 1.0;
};

using Sequence = std::vector<LabeledBox>;

// Frame id -> boxes in that frame, frames ascending, original order kept
// within a frame.
std::map<int, std::vector<LabeledBox>> group_by_frame(const Sequence& seq);

// Throws std::invalid_argument when a (frame, object) pair repeats.
void check_unique_ids(const Sequence& seq, const char* what);

}  // namespace sahitrack
