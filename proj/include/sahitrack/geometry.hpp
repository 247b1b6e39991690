#pragma once

#include <ostream>

namespace sahitrack {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Axis-aligned box in global frame pixels. Top-left origin, y grows downward.
// Width and height are strictly positive; construction rejects anything else.
class BBox {
 public:
  BBox(double x, double y, double w, double h);

  static BBox from_center(double cx, double cy, double w, double h);

  double x() const { return x_; }
  double y() const { return y_; }
  double w() const { return w_; }
  double h() const { return h_; }
  double right() const { return x_ + w_; }
  double bottom() const { return y_ + h_; }
  double area() const { return w_ * h_; }
  Point center() const { return {x_ + 0.5 * w_, y_ + 0.5 * h_}; }

  BBox translated(double dx, double dy) const { return {x_ + dx, y_ + dy, w_, h_}; }
  BBox scaled(double s) const { return {x_ * s, y_ * s, w_ * s, h_ * s}; }

  bool operator==(const BBox&) const = default;

 private:
  double x_;
  double y_;
  double w_;
  double h_;
};

std::ostream& operator<<(std::ostream& os, const BBox& b);

double intersection_area(const BBox& a, const BBox& b);

// Intersection over union, in [0, 1].
double iou(const BBox& a, const BBox& b);

// Distance-IoU: iou - squared center distance / squared diagonal of the
// smallest enclosing box. Range (-1, 1].
double diou(const BBox& a, const BBox& b);

}  // namespace sahitrack
