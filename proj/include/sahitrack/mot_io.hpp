#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <vector>

#include "sahitrack/detect.hpp"
#include "sahitrack/sequence.hpp"
#include "sahitrack/tracker.hpp"

namespace sahitrack {

// MOT text rows: frame,id,x,y,w,h,conf,-1,-1,-1. Reading accepts any row
// with at least six numeric fields; a missing conf reads as 1.
Sequence read_mot(const std::filesystem::path& path);
Sequence parse_mot(std::istream& in, const std::string& source);
void write_mot(std::ostream& out, const Sequence& seq);
void write_mot(const std::filesystem::path& path, const Sequence& seq);

// Detection files: a '#dim=D' header, then frame,x,y,w,h,conf[,e1..eD].
std::map<int, std::vector<Detection>> read_detections(const std::filesystem::path& path);
std::map<int, std::vector<Detection>> parse_detections(std::istream& in, const std::string& source);
void write_detections(std::ostream& out, const std::map<int, std::vector<Detection>>& frames, int dim);
void write_detections(const std::filesystem::path& path, const std::map<int, std::vector<Detection>>& frames,
                      int dim);

// frame,regions_processed,detections,live_tracks. Deterministic for a given
// config and seed.
void write_region_log(const std::filesystem::path& path, const std::vector<FrameOutput>& frames);
// frame,wall_time_s. Machine dependent.
void write_timing_log(const std::filesystem::path& path, const std::vector<FrameOutput>& frames);

struct RunSidecar {
  double fps = 0.0;
  double regions_mean = 0.0;
  bool has_fps = false;
  bool has_regions = false;
};

// Reads fps from a timing log and the mean region count from a region log.
// Either path may be empty.
RunSidecar read_sidecars(const std::filesystem::path& timing_log, const std::filesystem::path& region_log);

}  // namespace sahitrack
