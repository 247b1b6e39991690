#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "sahitrack/geometry.hpp"

namespace sahitrack {

// One cell of the slicing grid, the unit of detector invocation.
struct Region {
  int index = 0;
  BBox box{0, 0, 1, 1};
};

// Overlapping sliding-window grid over a full frame. Windows start at
// multiples of window * (1 - overlap); when the last stride-aligned window
// stops short of the frame edge a window flush with the edge is appended.
// Regions are ordered row-major (by y start, then x start).
class SliceGrid {
 public:
  SliceGrid(int image_w, int image_h, int window_w, int window_h, double overlap);

  int image_w() const { return image_w_; }
  int image_h() const { return image_h_; }
  int window_w() const { return window_w_; }
  int window_h() const { return window_h_; }
  double overlap() const { return overlap_; }

  const std::vector<Region>& regions() const { return regions_; }
  std::size_t size() const { return regions_.size(); }
  const Region& operator[](std::size_t i) const { return regions_[i]; }

  const std::vector<double>& x_starts() const { return x_starts_; }
  const std::vector<double>& y_starts() const { return y_starts_; }

  bool contains_point(Point p) const;

 private:
  int image_w_;
  int image_h_;
  int window_w_;
  int window_h_;
  double overlap_;
  std::vector<double> x_starts_;
  std::vector<double> y_starts_;
  std::vector<Region> regions_;
};

SliceGrid build_grid(int image_w, int image_h, int window_w, int window_h, double overlap);

// Regions whose box contains the point, left/top edges inclusive and
// right/bottom edges exclusive. Empty for points outside the frame.
std::vector<Region> regions_containing(const SliceGrid& grid, Point p);

// Half-open containment test shared by regions_containing and its tests.
bool region_contains(const Region& r, Point p);

struct SamplerConfig {
  int per_track_samples = 2;
  int uniform_samples = 5;
  std::uint64_t rng_seed = 0;
  // Process every region each frame (plain SAHI). Used for baselines and
  // ground-truth-detection ablations.
  bool full_grid = false;
};

// Adaptive SAHI sampler. Owns one RNG stream per tracking run; each call
// consumes it in a fixed order: per-center samples in the given order, then
// the uniform discovery sample.
class AdaptiveSampler {
 public:
  explicit AdaptiveSampler(SamplerConfig cfg);

  // Returns sampled regions sorted by region index, without duplicates.
  std::vector<Region> sample(const SliceGrid& grid, std::span<const Point> predicted_centers);

  const SamplerConfig& config() const { return cfg_; }

 private:
  SamplerConfig cfg_;
  std::mt19937_64 rng_;
};

// Single-shot convenience over AdaptiveSampler.
std::vector<Region> adaptive_sample(const SliceGrid& grid, std::span<const Point> predicted_centers,
                                    const SamplerConfig& cfg);

}  // namespace sahitrack
