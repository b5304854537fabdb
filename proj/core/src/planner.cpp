#include "hivemind/planner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hivemind/engine.hpp"

namespace hive {

Footprint footprint_from_fov(double altitude_m, double fov_diag_deg, double aspect_w,
                             double aspect_h) {
  if (altitude_m <= 0.0) throw SimError("footprint_from_fov: altitude must be positive");
  if (fov_diag_deg <= 0.0 || fov_diag_deg >= 180.0) {
    throw SimError("footprint_from_fov: fov must be in (0, 180) degrees");
  }
  double half = fov_diag_deg / 2.0 * std::numbers::pi / 180.0;
  double diag = 2.0 * altitude_m * std::tan(half);
  double hyp = std::hypot(aspect_w, aspect_h);
  return {diag * aspect_w / hyp, diag * aspect_h / hyp};
}

std::pair<int, int> grid_dims(int n, double field_w, double field_h) {
  int best_cols = 1;
  int best_rows = n;
  double best_distortion = std::numeric_limits<double>::max();
  for (int cols = 1; cols <= n; ++cols) {
    if (n % cols != 0) continue;
    int rows = n / cols;
    double cell_aspect = (field_w / cols) / (field_h / rows);
    double distortion = std::max(cell_aspect, 1.0 / cell_aspect);
    if (distortion < best_distortion) {
      best_distortion = distortion;
      best_cols = cols;
      best_rows = rows;
    }
  }
  return {best_cols, best_rows};
}

std::vector<Region> partition_area(const Field& field, int n_devices) {
  if (n_devices < 1) throw SimError("partition_area: need at least one device");
  auto [cols, rows] = grid_dims(n_devices, field.width, field.height);
  double cw = field.width / cols;
  double ch = field.height / rows;
  std::vector<Region> regions;
  regions.reserve(static_cast<std::size_t>(n_devices));
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      regions.push_back(Region{Rect{c * cw, r * ch, cw, ch}, r * cols + c});
    }
  }
  return regions;
}

double Route::total_length() const {
  double len = 0.0;
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    len += distance(waypoints[i - 1], waypoints[i]);
  }
  return len;
}

Route plan_route(const Rect& region, const Footprint& fp, double lane_overlap, Point takeoff) {
  double max_spacing = fp.width * (1.0 - lane_overlap);
  if (max_spacing <= 0.0) throw SimError("plan_route: lane overlap leaves no spacing");
  int lanes = std::max(1, static_cast<int>(std::ceil(region.w / max_spacing)));
  double spacing = region.w / lanes;

  // Start at the region corner nearest the take-off point.
  bool start_left = std::abs(takeoff.x - region.x) <= std::abs(takeoff.x - region.right());
  bool start_bottom = std::abs(takeoff.y - region.y) <= std::abs(takeoff.y - region.top());

  Route route;
  route.lane_spacing = spacing;
  route.scan_right = start_left;
  route.waypoints.reserve(static_cast<std::size_t>(lanes) * 2);
  for (int i = 0; i < lanes; ++i) {
    int lane_index = start_left ? i : lanes - 1 - i;
    double x = region.x + (lane_index + 0.5) * spacing;
    bool upward = start_bottom ? (i % 2 == 0) : (i % 2 == 1);
    double y_a = upward ? region.y : region.top();
    double y_b = upward ? region.top() : region.y;
    route.waypoints.push_back({x, y_a});
    route.waypoints.push_back({x, y_b});
  }
  return route;
}

void validate_photo_spacing(double speed_mps, double photo_interval_s, const Footprint& fp) {
  if (speed_mps * photo_interval_s > fp.height) {
    throw SimError("coverage gap: photo spacing " +
                   std::to_string(speed_mps * photo_interval_s) + "m exceeds footprint " +
                   std::to_string(fp.height) + "m along-track");
  }
}

std::set<int> region_neighbors(const std::vector<Region>& regions, const Rect& region,
                               int self_owner) {
  std::set<int> out;
  for (const auto& r : regions) {
    if (r.owner == self_owner) continue;
    if (share_border(region, r.rect)) out.insert(r.owner);
  }
  return out;
}

std::vector<Region> split_remainder(const Rect& remainder, const std::vector<int>& recipients) {
  std::vector<std::pair<int, double>> shares;
  shares.reserve(recipients.size());
  for (int r : recipients) shares.emplace_back(r, 1.0);
  return split_remainder_weighted(remainder, std::move(shares));
}

std::vector<Region> split_remainder_weighted(const Rect& remainder,
                                             std::vector<std::pair<int, double>> shares) {
  std::vector<Region> out;
  std::erase_if(shares, [](const auto& s) { return s.second <= 0.0; });
  if (shares.empty() || remainder.area() <= 0.0) return out;
  std::sort(shares.begin(), shares.end());
  double total = 0.0;
  for (const auto& [id, w] : shares) total += w;
  double cum = 0.0;
  for (std::size_t i = 0; i < shares.size(); ++i) {
    // Compute both edges as fractions of the remainder so adjacent strips
    // share the exact same boundary coordinate (no cumulative rounding).
    double x0 = remainder.x + remainder.w * (cum / total);
    cum += shares[i].second;
    double x1 = (i + 1 == shares.size()) ? remainder.right()
                                         : remainder.x + remainder.w * (cum / total);
    out.push_back(Region{Rect{x0, remainder.y, x1 - x0, remainder.h}, shares[i].first});
  }
  return out;
}

Rect surveyed_slab(const Rect& region, double lane_spacing, bool scan_right,
                   int completed_lanes) {
  int total = std::max(1, static_cast<int>(std::lround(region.w / lane_spacing)));
  int done = std::clamp(completed_lanes, 0, total);
  double w = done * lane_spacing;
  if (done == total) w = region.w;  // absorb rounding on the final lane
  double x = scan_right ? region.x : region.right() - w;
  return {x, region.y, w, region.h};
}

Rect remainder_slab(const Rect& region, double lane_spacing, bool scan_right,
                    int completed_lanes) {
  Rect done = surveyed_slab(region, lane_spacing, scan_right, completed_lanes);
  double w = region.w - done.w;
  double x = scan_right ? region.x + done.w : region.x;
  return {x, region.y, w, region.h};
}

double route_coverage_fraction(const Rect& region, const Route& route, const Footprint& fp,
                               double photo_spacing, double resolution) {
  Raster raster(region, resolution);
  const auto& wps = route.waypoints;
  for (std::size_t i = 1; i < wps.size(); ++i) {
    double seg_len = distance(wps[i - 1], wps[i]);
    int steps = std::max(1, static_cast<int>(std::ceil(seg_len / photo_spacing)));
    for (int s = 0; s <= steps; ++s) {
      double f = static_cast<double>(s) / steps;
      Point p{wps[i - 1].x + f * (wps[i].x - wps[i - 1].x),
              wps[i - 1].y + f * (wps[i].y - wps[i - 1].y)};
      raster.paint(footprint_rect(p, fp.width, fp.height));
    }
  }
  return raster.covered_fraction();
}

}  // namespace hive
