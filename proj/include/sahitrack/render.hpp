#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "sahitrack/sequence.hpp"

namespace sahitrack {

using Color = std::array<std::uint8_t, 3>;

struct Image {
  Image(int width, int height, Color background = {0, 0, 0});

  int width;
  int height;
  std::vector<std::uint8_t> rgb;

  void set(int x, int y, Color c);
  Color at(int x, int y) const;
};

// Stable, well separated color per identity.
Color color_for_id(int id);

void draw_box(Image& img, const BBox& box, Color c, int thickness = 1);
// Decimal id in a 3x5 pixel font scaled by `scale`, top-left at (x, y).
void draw_label(Image& img, int x, int y, int id, Color c, int scale = 1);

void write_ppm(const std::filesystem::path& path, const Image& img);

struct RenderOptions {
  int frame_w = 4096;
  int frame_h = 2048;
  // Integer downscale factor applied to the output images.
  int downscale = 1;
  // Frames 1..n_frames; 0 means up to the last frame present in the sequence.
  int n_frames = 0;
};

// One P6 image per frame named frame_000001.ppm, ... Throws when a box does
// not fit the stated frame size.
std::vector<std::filesystem::path> render_sequence(const Sequence& seq, const RenderOptions& opt,
                                                   const std::filesystem::path& out_dir);

}  // namespace sahitrack
