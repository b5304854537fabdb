#include "hivemind/geometry.hpp"

#include <algorithm>

namespace hive {

bool share_border(const Rect& a, const Rect& b, double eps) {
  auto overlap = [eps](double lo1, double hi1, double lo2, double hi2) {
    return std::min(hi1, hi2) - std::max(lo1, lo2) > eps;
  };
  bool touch_x = std::abs(a.right() - b.x) < eps || std::abs(b.right() - a.x) < eps;
  bool touch_y = std::abs(a.top() - b.y) < eps || std::abs(b.top() - a.y) < eps;
  if (touch_x && overlap(a.y, a.top(), b.y, b.top())) return true;
  if (touch_y && overlap(a.x, a.right(), b.x, b.right())) return true;
  return false;
}

Raster::Raster(const Rect& bounds, double resolution)
    : bounds_(bounds),
      res_(resolution),
      nx_(std::max(1, static_cast<int>(std::lround(bounds.w / resolution)))),
      ny_(std::max(1, static_cast<int>(std::lround(bounds.h / resolution)))),
      cells_(static_cast<std::size_t>(nx_) * ny_, 0) {}

void Raster::paint(const Rect& r) {
  // Cells whose center lies inside r, half-open on the right/top edges so a
  // center that falls exactly on a boundary shared by two adjacent rects is
  // attributed to exactly one of them. Cell centers sit strictly inside the
  // raster bounds, so the field's own outer edges are never affected.
  int ix0 = std::max(0, static_cast<int>(std::floor((r.x - bounds_.x) / res_ - 0.5)) );
  int ix1 = std::min(nx_ - 1, static_cast<int>(std::ceil((r.right() - bounds_.x) / res_)));
  int iy0 = std::max(0, static_cast<int>(std::floor((r.y - bounds_.y) / res_ - 0.5)));
  int iy1 = std::min(ny_ - 1, static_cast<int>(std::ceil((r.top() - bounds_.y) / res_)));
  for (int iy = iy0; iy <= iy1; ++iy) {
    double cy = bounds_.y + (iy + 0.5) * res_;
    if (cy < r.y || cy >= r.top()) continue;
    for (int ix = ix0; ix <= ix1; ++ix) {
      double cx = bounds_.x + (ix + 0.5) * res_;
      if (cx < r.x || cx >= r.right()) continue;
      auto& c = cells_[static_cast<std::size_t>(iy) * nx_ + ix];
      if (c < 255) ++c;
    }
  }
}

double Raster::covered_fraction() const {
  std::size_t covered = 0;
  for (auto c : cells_) covered += (c > 0);
  return static_cast<double>(covered) / static_cast<double>(cells_.size());
}

bool Raster::exact_tiling() const {
  return std::all_of(cells_.begin(), cells_.end(), [](std::uint8_t c) { return c == 1; });
}

bool tiling_ok(const Rect& field, const std::vector<Rect>& rects, double resolution) {
  Raster raster(field, resolution);
  for (const auto& r : rects) raster.paint(r);
  return raster.exact_tiling();
}

}  // namespace hive
