#pragma once

#include <optional>
#include <set>
#include <vector>

#include "hivemind/geometry.hpp"
#include "hivemind/world.hpp"

namespace hive {

// Ground rectangle imaged by the camera: width is cross-track (normal to
// the flight lanes), height along-track.
struct Footprint {
  double width = 0.0;
  double height = 0.0;
};

// diagonal = 2 * altitude * tan(fov/2), split by the sensor aspect ratio.
Footprint footprint_from_fov(double altitude_m, double fov_diag_deg, double aspect_w,
                             double aspect_h);

struct Region {
  Rect rect;
  int owner = -1;
};

// Factor pair (cols, rows) with cols*rows == n minimizing cell aspect
// distortion on the given field.
std::pair<int, int> grid_dims(int n, double field_w, double field_h);

std::vector<Region> partition_area(const Field& field, int n_devices);

// Boustrophedon lanes parallel to the y axis. Lane spacing is chosen as
// region_width / ceil(region_width / max_spacing) so lanes stay within the
// coverage bound while splitting the region evenly.
struct Route {
  std::vector<Point> waypoints;
  double lane_spacing = 0.0;
  bool scan_right = true;  // lanes visited in +x order
  double total_length() const;
};

Route plan_route(const Rect& region, const Footprint& fp, double lane_overlap, Point takeoff);

// Along-track photo spacing check: speed * interval must not exceed the
// footprint height or the lane has coverage gaps.
void validate_photo_spacing(double speed_mps, double photo_interval_s, const Footprint& fp);

// Owners of regions sharing a positive-length border with `region`.
std::set<int> region_neighbors(const std::vector<Region>& regions, const Rect& region,
                               int self_owner);

// Splits `remainder` into equal-area vertical strips, one per recipient,
// in ascending recipient-id order.
std::vector<Region> split_remainder(const Rect& remainder, const std::vector<int>& recipients);

// Same split with strip widths proportional to each recipient's share;
// non-positive shares are dropped. Strips are ordered by recipient id.
std::vector<Region> split_remainder_weighted(const Rect& remainder,
                                             std::vector<std::pair<int, double>> shares);

// Lane-granular progress geometry: after `completed_lanes` full lanes the
// surveyed part of a region is a slab starting from the scan side; the
// remainder is the complementary slab. Used for repartitioning so the
// reassigned area never overlaps completed lanes.
Rect surveyed_slab(const Rect& region, double lane_spacing, bool scan_right, int completed_lanes);
Rect remainder_slab(const Rect& region, double lane_spacing, bool scan_right,
                    int completed_lanes);

// Coverage oracle: fraction of the region covered by photo footprints
// taken every `photo_spacing` meters along the route.
double route_coverage_fraction(const Rect& region, const Route& route, const Footprint& fp,
                               double photo_spacing, double resolution = 0.1);

}  // namespace hive
