#include "sahitrack/mot_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace sahitrack {
namespace {

[[noreturn]] void fail(const std::string& source, int line, const std::string& what) {
  throw std::runtime_error(source + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : field.substr(b, e - b + 1));
  }
  return out;
}

double to_double(const std::string& s, const std::string& source, int line) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) {
    fail(source, line, "expected a number, got '" + s + "'");
  }
  return v;
}

int to_int(const std::string& s, const std::string& source, int line) {
  const double v = to_double(s, source, line);
  if (v != std::floor(v) || std::abs(v) > 2e9) fail(source, line, "expected an integer, got '" + s + "'");
  return static_cast<int>(v);
}

BBox to_box(double x, double y, double w, double h, const std::string& source, int line) {
  if (!(w > 0.0) || !(h > 0.0)) fail(source, line, "box width and height must be positive");
  return BBox(x, y, w, h);
}

bool skippable(const std::string& line) {
  const auto b = line.find_first_not_of(" \t\r");
  return b == std::string::npos || line[b] == '#';
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

Sequence parse_mot(std::istream& in, const std::string& source) {
  Sequence seq;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (skippable(line)) continue;
    const auto f = split_csv(line);
    if (f.size() < 6) fail(source, n, "expected at least 6 fields, got " + std::to_string(f.size()));
    LabeledBox b;
    b.frame_id = to_int(f[0], source, n);
    b.object_id = to_int(f[1], source, n);
    b.box = to_box(to_double(f[2], source, n), to_double(f[3], source, n), to_double(f[4], source, n),
                   to_double(f[5], source, n), source, n);
    b.confidence = f.size() > 6 ? to_double(f[6], source, n) : 1.0;
    seq.push_back(b);
  }
  return seq;
}

Sequence read_mot(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_mot(in, path.string());
}

void write_mot(std::ostream& out, const Sequence& seq) {
  char buf[256];
  for (const LabeledBox& b : seq) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.2f,%.2f,%.2f,%.2f,%.4f,-1,-1,-1\n", b.frame_id, b.object_id, b.box.x(),
                  b.box.y(), b.box.w(), b.box.h(), b.confidence);
    out << buf;
  }
}

void write_mot(const std::filesystem::path& path, const Sequence& seq) {
  auto out = open_out(path);
  write_mot(out, seq);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::map<int, std::vector<Detection>> parse_detections(std::istream& in, const std::string& source) {
  std::map<int, std::vector<Detection>> frames;
  std::string line;
  int n = 0;
  int dim = -1;
  while (std::getline(in, line)) {
    ++n;
    if (dim < 0 && line.rfind("#dim=", 0) == 0) {
      dim = to_int(line.substr(5, line.find_last_not_of(" \t\r") - 4), source, n);
      if (dim < 0) fail(source, n, "negative embedding dimension");
      continue;
    }
    if (skippable(line)) continue;
    if (dim < 0) fail(source, n, "missing '#dim=D' header before the first detection");
    const auto f = split_csv(line);
    const std::size_t want = 6 + static_cast<std::size_t>(dim);
    if (f.size() != 6 && f.size() != want) {
      fail(source, n, "expected 6 or " + std::to_string(want) + " fields, got " + std::to_string(f.size()));
    }
    Detection d;
    const int frame = to_int(f[0], source, n);
    d.box = to_box(to_double(f[1], source, n), to_double(f[2], source, n), to_double(f[3], source, n),
                   to_double(f[4], source, n), source, n);
    d.confidence = to_double(f[5], source, n);
    if (d.confidence < 0.0 || d.confidence > 1.0) fail(source, n, "confidence outside [0, 1]");
    if (f.size() == want && dim > 0) {
      d.embedding.reserve(static_cast<std::size_t>(dim));
      for (std::size_t k = 6; k < f.size(); ++k) d.embedding.push_back(to_double(f[k], source, n));
      double norm = 0.0;
      for (double v : d.embedding) norm += v * v;
      if (std::abs(std::sqrt(norm) - 1.0) > 1e-6) fail(source, n, "embedding is not unit norm");
    }
    frames[frame].push_back(std::move(d));
  }
  return frames;
}

std::map<int, std::vector<Detection>> read_detections(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_detections(in, path.string());
}

void write_detections(std::ostream& out, const std::map<int, std::vector<Detection>>& frames, int dim) {
  out << "#dim=" << dim << "\n";
  char buf[256];
  for (const auto& [frame, dets] : frames) {
    for (const Detection& d : dets) {
      std::snprintf(buf, sizeof buf, "%d,%.2f,%.2f,%.2f,%.2f,%.4f", frame, d.box.x(), d.box.y(), d.box.w(),
                    d.box.h(), d.confidence);
      out << buf;
      if (dim > 0 && d.has_embedding()) {
        // Enough digits that the unit norm survives the round trip.
        for (double v : d.embedding) out << ',' << fmt("%.17g", v);
      }
      out << '\n';
    }
  }
}

void write_detections(const std::filesystem::path& path, const std::map<int, std::vector<Detection>>& frames,
                      int dim) {
  auto out = open_out(path);
  write_detections(out, frames, dim);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_region_log(const std::filesystem::path& path, const std::vector<FrameOutput>& frames) {
  auto out = open_out(path);
  out << "frame,regions_processed,detections,live_tracks\n";
  for (const FrameOutput& f : frames) {
    out << f.frame_id << ',' << f.regions_processed << ',' << f.detections << ',' << f.live_tracks << '\n';
  }
}

void write_timing_log(const std::filesystem::path& path, const std::vector<FrameOutput>& frames) {
  auto out = open_out(path);
  out << "frame,wall_time_s\n";
  for (const FrameOutput& f : frames) out << f.frame_id << ',' << fmt("%.6f", f.wall_time) << '\n';
}

RunSidecar read_sidecars(const std::filesystem::path& timing_log, const std::filesystem::path& region_log) {
  RunSidecar s;
  std::string line;
  if (!timing_log.empty()) {
    auto in = open_in(timing_log);
    double total = 0.0;
    long frames = 0;
    int n = 0;
    while (std::getline(in, line)) {
      ++n;
      if (n == 1 || skippable(line)) continue;
      const auto f = split_csv(line);
      if (f.size() != 2) fail(timing_log.string(), n, "expected frame,wall_time_s");
      total += to_double(f[1], timing_log.string(), n);
      ++frames;
    }
    s.has_fps = true;
    s.fps = total > 0.0 ? static_cast<double>(frames) / total : 0.0;
  }
  if (!region_log.empty()) {
    auto in = open_in(region_log);
    double total = 0.0;
    long frames = 0;
    int n = 0;
    while (std::getline(in, line)) {
      ++n;
      if (n == 1 || skippable(line)) continue;
      const auto f = split_csv(line);
      if (f.size() < 2) fail(region_log.string(), n, "expected frame,regions_processed,...");
      total += to_double(f[1], region_log.string(), n);
      ++frames;
    }
    s.has_regions = true;
    s.regions_mean = frames > 0 ? total / static_cast<double>(frames) : 0.0;
  }
  return s;
}

}  // namespace sahitrack
