#include "sahitrack/slicing.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sahitrack {
namespace {

std::vector<double> axis_starts(int image, int window, double overlap) {
  const double stride = static_cast<double>(window) * (1.0 - overlap);
  const double last = static_cast<double>(image - window);
  std::vector<double> starts;
  for (long k = 0;; ++k) {
    const double s = static_cast<double>(k) * stride;
    if (s > last) break;
    starts.push_back(s);
  }
  if (starts.back() < last) starts.push_back(last);
  starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
  return starts;
}

// Indices of windows [s, s + window) containing v.
std::pair<std::size_t, std::size_t> axis_range(const std::vector<double>& starts, double window,
                                               double v) {
  // First start > v - window, last start <= v.
  const auto lo = std::upper_bound(starts.begin(), starts.end(), v - window);
  const auto hi = std::upper_bound(starts.begin(), starts.end(), v);
  return {static_cast<std::size_t>(lo - starts.begin()), static_cast<std::size_t>(hi - starts.begin())};
}

}  // namespace

SliceGrid::SliceGrid(int image_w, int image_h, int window_w, int window_h, double overlap)
    : image_w_(image_w), image_h_(image_h), window_w_(window_w), window_h_(window_h), overlap_(overlap) {
  if (image_w <= 0 || image_h <= 0 || window_w <= 0 || window_h <= 0) {
    throw std::invalid_argument("slice grid dimensions must be positive");
  }
  if (window_w > image_w || window_h > image_h) {
    throw std::invalid_argument("slice window " + std::to_string(window_w) + "x" + std::to_string(window_h) +
                                " is larger than image " + std::to_string(image_w) + "x" +
                                std::to_string(image_h));
  }
  if (!(overlap >= 0.0 && overlap < 1.0)) {
    throw std::invalid_argument("slice overlap must lie in [0, 1), got " + std::to_string(overlap));
  }
  x_starts_ = axis_starts(image_w, window_w, overlap);
  y_starts_ = axis_starts(image_h, window_h, overlap);
  regions_.reserve(x_starts_.size() * y_starts_.size());
  int index = 0;
  for (double ys : y_starts_) {
    for (double xs : x_starts_) {
      regions_.push_back(Region{index++, BBox(xs, ys, window_w, window_h)});
    }
  }
}

bool SliceGrid::contains_point(Point p) const {
  return p.x >= 0.0 && p.y >= 0.0 && p.x < image_w_ && p.y < image_h_;
}

SliceGrid build_grid(int image_w, int image_h, int window_w, int window_h, double overlap) {
  return SliceGrid(image_w, image_h, window_w, window_h, overlap);
}

bool region_contains(const Region& r, Point p) {
  return p.x >= r.box.x() && p.x < r.box.right() && p.y >= r.box.y() && p.y < r.box.bottom();
}

std::vector<Region> regions_containing(const SliceGrid& grid, Point p) {
  std::vector<Region> out;
  if (!grid.contains_point(p)) return out;
  const auto [x0, x1] = axis_range(grid.x_starts(), grid.window_w(), p.x);
  const auto [y0, y1] = axis_range(grid.y_starts(), grid.window_h(), p.y);
  const std::size_t nx = grid.x_starts().size();
  for (std::size_t iy = y0; iy < y1; ++iy) {
    for (std::size_t ix = x0; ix < x1; ++ix) {
      out.push_back(grid[iy * nx + ix]);
    }
  }
  return out;
}

AdaptiveSampler::AdaptiveSampler(SamplerConfig cfg) : cfg_(cfg), rng_(cfg.rng_seed) {
  if (cfg.per_track_samples < 0 || cfg.uniform_samples < 0) {
    throw std::invalid_argument("sampler counts must be non-negative");
  }
}

std::vector<Region> AdaptiveSampler::sample(const SliceGrid& grid, std::span<const Point> predicted_centers) {
  if (cfg_.full_grid) return grid.regions();

  std::vector<char> picked(grid.size(), 0);
  for (const Point& c : predicted_centers) {
    const std::vector<Region> candidates = regions_containing(grid, c);
    std::vector<Region> chosen;
    std::sample(candidates.begin(), candidates.end(), std::back_inserter(chosen),
                static_cast<std::size_t>(cfg_.per_track_samples), rng_);
    for (const Region& r : chosen) picked[static_cast<std::size_t>(r.index)] = 1;
  }

  const std::size_t n_uniform = std::min<std::size_t>(static_cast<std::size_t>(cfg_.uniform_samples), grid.size());
  if (n_uniform > 0) {
    std::vector<int> all(grid.size());
    std::iota(all.begin(), all.end(), 0);
    std::vector<int> chosen;
    std::sample(all.begin(), all.end(), std::back_inserter(chosen), n_uniform, rng_);
    for (int i : chosen) picked[static_cast<std::size_t>(i)] = 1;
  }

  std::vector<Region> out;
  for (std::size_t i = 0; i < picked.size(); ++i) {
    if (picked[i]) out.push_back(grid[i]);
  }
  return out;
}

std::vector<Region> adaptive_sample(const SliceGrid& grid, std::span<const Point> predicted_centers,
                                    const SamplerConfig& cfg) {
  AdaptiveSampler sampler(cfg);
  return sampler.sample(grid, predicted_centers);
}

}  // namespace sahitrack
