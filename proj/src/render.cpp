#include "sahitrack/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace sahitrack {
namespace {

// 3x5 glyphs for 0-9, one row per entry, bit 2 is the left column.
constexpr std::array<std::array<std::uint8_t, 5>, 10> kDigits{{
    {7, 5, 5, 5, 7},
    {2, 6, 2, 2, 7},
    {7, 1, 7, 4, 7},
    {7, 1, 7, 1, 7},
    {5, 5, 7, 1, 1},
    {7, 4, 7, 1, 7},
    {7, 4, 7, 5, 7},
    {7, 1, 1, 1, 1},
    {7, 5, 7, 5, 7},
    {7, 5, 7, 1, 7},
}};

constexpr double kFitTolerance = 0.5;

}  // namespace

Image::Image(int w, int h, Color background) : width(w), height(h) {
  if (w <= 0 || h <= 0) throw std::invalid_argument("image size must be positive");
  rgb.resize(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3);
  for (std::size_t i = 0; i < rgb.size(); i += 3) {
    rgb[i] = background[0];
    rgb[i + 1] = background[1];
    rgb[i + 2] = background[2];
  }
}

void Image::set(int x, int y, Color c) {
  if (x < 0 || y < 0 || x >= width || y >= height) return;
  const std::size_t o = (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)) * 3;
  rgb[o] = c[0];
  rgb[o + 1] = c[1];
  rgb[o + 2] = c[2];
}

Color Image::at(int x, int y) const {
  const std::size_t o = (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)) * 3;
  return {rgb[o], rgb[o + 1], rgb[o + 2]};
}

Color color_for_id(int id) {
  // Golden-angle hue walk, full saturation.
  const double hue = std::fmod(static_cast<double>(id) * 137.508, 360.0) / 60.0;
  const double x = 1.0 - std::abs(std::fmod(hue, 2.0) - 1.0);
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(hue)) {
    case 0: r = 1; g = x; break;
    case 1: r = x; g = 1; break;
    case 2: g = 1; b = x; break;
    case 3: g = x; b = 1; break;
    case 4: r = x; b = 1; break;
    default: r = 1; b = x; break;
  }
  auto q = [](double v) { return static_cast<std::uint8_t>(std::lround(55.0 + 200.0 * v)); };
  return {q(r), q(g), q(b)};
}

void draw_box(Image& img, const BBox& box, Color c, int thickness) {
  const int x0 = static_cast<int>(std::floor(box.x()));
  const int y0 = static_cast<int>(std::floor(box.y()));
  const int x1 = std::max(x0, static_cast<int>(std::ceil(box.right())) - 1);
  const int y1 = std::max(y0, static_cast<int>(std::ceil(box.bottom())) - 1);
  for (int t = 0; t < thickness; ++t) {
    for (int x = x0; x <= x1; ++x) {
      img.set(x, y0 + t, c);
      img.set(x, y1 - t, c);
    }
    for (int y = y0; y <= y1; ++y) {
      img.set(x0 + t, y, c);
      img.set(x1 - t, y, c);
    }
  }
}

void draw_label(Image& img, int x, int y, int id, Color c, int scale) {
  const std::string text = std::to_string(id);
  int pen = x;
  for (char ch : text) {
    if (ch < '0' || ch > '9') continue;
    const auto& glyph = kDigits[static_cast<std::size_t>(ch - '0')];
    for (int row = 0; row < 5; ++row) {
      for (int col = 0; col < 3; ++col) {
        if (!(glyph[static_cast<std::size_t>(row)] & (4 >> col))) continue;
        for (int dy = 0; dy < scale; ++dy) {
          for (int dx = 0; dx < scale; ++dx) img.set(pen + col * scale + dx, y + row * scale + dy, c);
        }
      }
    }
    pen += 4 * scale;
  }
}

void write_ppm(const std::filesystem::path& path, const Image& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "P6\n" << img.width << ' ' << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.rgb.data()), static_cast<std::streamsize>(img.rgb.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<std::filesystem::path> render_sequence(const Sequence& seq, const RenderOptions& opt,
                                                   const std::filesystem::path& out_dir) {
  if (opt.downscale < 1) throw std::invalid_argument("render downscale must be >= 1");
  for (const LabeledBox& b : seq) {
    if (b.box.x() < -kFitTolerance || b.box.y() < -kFitTolerance || b.box.right() > opt.frame_w + kFitTolerance ||
        b.box.bottom() > opt.frame_h + kFitTolerance) {
      std::ostringstream msg;
      msg << "frame " << b.frame_id << " object " << b.object_id << ": " << b.box << " does not fit a "
          << opt.frame_w << "x" << opt.frame_h << " frame";
      throw std::invalid_argument(msg.str());
    }
  }
  int last = opt.n_frames;
  if (last == 0) {
    for (const LabeledBox& b : seq) last = std::max(last, b.frame_id);
  }
  std::filesystem::create_directories(out_dir);
  const auto frames = group_by_frame(seq);
  const int w = std::max(1, opt.frame_w / opt.downscale);
  const int h = std::max(1, opt.frame_h / opt.downscale);
  const double s = 1.0 / opt.downscale;

  std::vector<std::filesystem::path> written;
  for (int f = 1; f <= last; ++f) {
    Image img(w, h);
    if (const auto it = frames.find(f); it != frames.end()) {
      for (const LabeledBox& b : it->second) {
        const Color c = color_for_id(b.object_id);
        const BBox box(b.box.x() * s, b.box.y() * s, std::max(b.box.w() * s, 1.0), std::max(b.box.h() * s, 1.0));
        draw_box(img, box, c);
        draw_label(img, static_cast<int>(box.x()), static_cast<int>(box.y()) - 7, b.object_id, c);
      }
    }
    char name[32];
    std::snprintf(name, sizeof name, "frame_%06d.ppm", f);
    write_ppm(out_dir / name, img);
    written.push_back(out_dir / name);
  }
  return written;
}

}  // namespace sahitrack
