#include "sahitrack/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sahitrack {

BBox::BBox(double x, double y, double w, double h) : x_(x), y_(y), w_(w), h_(h) {
  if (!(w > 0.0) || !(h > 0.0) || !std::isfinite(x) || !std::isfinite(y) ||
      !std::isfinite(w) || !std::isfinite(h)) {
    throw std::invalid_argument("BBox requires finite coordinates and positive size, got w=" +
                                std::to_string(w) + " h=" + std::to_string(h));
  }
}

BBox BBox::from_center(double cx, double cy, double w, double h) {
  return {cx - 0.5 * w, cy - 0.5 * h, w, h};
}

std::ostream& operator<<(std::ostream& os, const BBox& b) {
  return os << "BBox(" << b.x() << ", " << b.y() << ", " << b.w() << ", " << b.h() << ")";
}

double intersection_area(const BBox& a, const BBox& b) {
  const double iw = std::min(a.right(), b.right()) - std::max(a.x(), b.x());
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.y(), b.y());
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  return iw * ih;
}

double iou(const BBox& a, const BBox& b) {
  if (a == b) return 1.0;  // exact, whatever the rounding of the areas
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double diou(const BBox& a, const BBox& b) {
  const Point ca = a.center();
  const Point cb = b.center();
  const double dx = ca.x - cb.x;
  const double dy = ca.y - cb.y;
  const double rho2 = dx * dx + dy * dy;

  const double ew = std::max(a.right(), b.right()) - std::min(a.x(), b.x());
  const double eh = std::max(a.bottom(), b.bottom()) - std::min(a.y(), b.y());
  const double c2 = ew * ew + eh * eh;
  return iou(a, b) - rho2 / c2;
}

}  // namespace sahitrack
