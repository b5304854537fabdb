#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace hive {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Axis-aligned rectangle, closed boundary.
struct Rect {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double area() const { return w * h; }
  Point center() const { return {x + w / 2.0, y + h / 2.0}; }
  double right() const { return x + w; }
  double top() const { return y + h; }
  bool contains(Point p) const {
    return p.x >= x && p.x <= x + w && p.y >= y && p.y <= y + h;
  }
  bool contains_interior(Point p) const {
    return p.x > x && p.x < x + w && p.y > y && p.y < y + h;
  }
};

inline Rect footprint_rect(Point center, double w, double h) {
  return {center.x - w / 2.0, center.y - h / 2.0, w, h};
}

// True when the rectangles share a border segment of positive length
// (corner touches do not count as adjacency).
bool share_border(const Rect& a, const Rect& b, double eps = 1e-9);

// Counting raster over a bounding rectangle, used for the tiling and
// coverage audits. Cells are tested at their centers so exactly-abutting
// rectangles never double count.
class Raster {
 public:
  Raster(const Rect& bounds, double resolution);

  void paint(const Rect& r);
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  // Fraction of cells painted at least once.
  double covered_fraction() const;
  // True when every cell is painted exactly once.
  bool exact_tiling() const;
  std::uint8_t cell(int ix, int iy) const { return cells_[static_cast<std::size_t>(iy) * nx_ + ix]; }

 private:
  Rect bounds_;
  double res_;
  int nx_;
  int ny_;
  std::vector<std::uint8_t> cells_;
};

// Tiling audit: the rects must have pairwise-disjoint interiors and union
// equal to `field`, up to the raster resolution.
bool tiling_ok(const Rect& field, const std::vector<Rect>& rects, double resolution = 0.1);

}  // namespace hive
