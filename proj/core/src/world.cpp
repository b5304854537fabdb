#include "hivemind/world.hpp"

#include <algorithm>
#include <cmath>

#include "hivemind/engine.hpp"

namespace hive {

double DetectionModel::fpr() const {
  return std::max(floor_fpr, fpr0 * std::exp(-feedback_fp / kappa_fp));
}

double DetectionModel::fnr() const {
  double fnr0 = 1.0 - tpr0;
  return std::max(floor_fnr, fnr0 * std::exp(-feedback_fn / kappa_fn));
}

void DetectionModel::apply_feedback(int fp_samples, int fn_samples) {
  feedback_fp += fp_samples;
  feedback_fn += fn_samples;
}

PersonWalk::PersonWalk(const Field& field, std::uint64_t master_seed, int person_id,
                       double speed_mps, double max_dwell_s)
    : field_(field),
      speed_(speed_mps),
      max_dwell_s_(max_dwell_s),
      rng_(master_seed, "person-walk-" + std::to_string(person_id)) {
  Point start{rng_.uniform(0.0, field_.width), rng_.uniform(0.0, field_.height)};
  segments_.push_back(Segment{0, 0, start, start});
}

Point PersonWalk::start() const { return segments_.front().from; }

void PersonWalk::extend_to(SimTime t) const {
  while (segments_.back().t1 <= t) {
    const Segment& last = segments_.back();
    Point pos = last.to;
    Point wp{rng_.uniform(0.0, field_.width), rng_.uniform(0.0, field_.height)};
    double dwell = rng_.uniform(0.0, max_dwell_s_);
    SimTime travel_end = last.t1 + from_s(distance(pos, wp) / speed_);
    segments_.push_back(Segment{last.t1, travel_end, pos, wp});
    segments_.push_back(Segment{travel_end, travel_end + from_s(dwell), wp, wp});
  }
}

Point PersonWalk::position_at(SimTime t) const {
  extend_to(t);
  auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                             [](SimTime v, const Segment& s) { return v < s.t1; });
  if (it == segments_.end()) it = std::prev(segments_.end());
  const Segment& s = *it;
  if (s.t1 == s.t0) return s.to;
  double f = static_cast<double>(t - s.t0) / static_cast<double>(s.t1 - s.t0);
  f = std::clamp(f, 0.0, 1.0);
  return {s.from.x + f * (s.to.x - s.from.x), s.from.y + f * (s.to.y - s.from.y)};
}

std::vector<Point> World::place_items(const Field& field, int n, double min_separation,
                                      RngStream& stream) {
  std::vector<Point> placed;
  placed.reserve(n);
  constexpr int kMaxAttemptsPerItem = 10000;
  for (int i = 0; i < n; ++i) {
    bool ok = false;
    for (int attempt = 0; attempt < kMaxAttemptsPerItem && !ok; ++attempt) {
      Point p{stream.uniform(0.0, field.width), stream.uniform(0.0, field.height)};
      ok = std::all_of(placed.begin(), placed.end(),
                       [&](Point q) { return distance(p, q) >= min_separation; });
      if (ok) placed.push_back(p);
    }
    if (!ok) {
      throw SimError("place_items: field too small for " + std::to_string(n) +
                     " items at separation " + std::to_string(min_separation) + "m");
    }
  }
  return placed;
}

World::World(const WorldConfig& cfg, std::uint64_t master_seed) : cfg_(cfg) {
  if (cfg.field.width <= 0.0 || cfg.field.height <= 0.0) {
    throw SimError("world: field dimensions must be positive");
  }
  RngStream placement(master_seed, "item-placement");
  auto items = place_items(cfg.field, cfg.item_count, cfg.min_item_separation_m, placement);
  int next_id = 0;
  for (const auto& p : items) {
    objects_.push_back(TargetObject{next_id++, TargetKind::item, p});
  }
  first_person_id_ = next_id;
  for (int i = 0; i < cfg.person_count; ++i) {
    walks_.emplace_back(cfg.field, master_seed, i, cfg.person_speed_mps, cfg.person_max_dwell_s);
    objects_.push_back(TargetObject{next_id++, TargetKind::person, walks_.back().start()});
  }
}

bool World::is_person(int id) const { return id >= first_person_id_; }

Point World::object_position(int id, SimTime t) const {
  const TargetObject& obj = objects_.at(static_cast<std::size_t>(id));
  if (obj.kind == TargetKind::item) return obj.base;
  return walks_[static_cast<std::size_t>(id - first_person_id_)].position_at(t);
}

std::vector<int> World::objects_in_footprint(Point center, double w, double h, SimTime t) const {
  Rect fp = footprint_rect(center, w, h);
  std::vector<int> ids;
  for (const auto& obj : objects_) {
    if (fp.contains(object_position(obj.id, t))) ids.push_back(obj.id);
  }
  return ids;
}

DetectionOutcome World::sample_detection(const DetectionModel& model, const PhotoRecord& photo,
                                         RngStream& stream) const {
  DetectionOutcome out;
  for (int id : photo.ground_truth_ids) {
    if (stream.bernoulli(model.tpr())) out.detected_ids.push_back(id);
  }
  if (!photo.ground_truth_ids.empty()) {
    out.flagged = !out.detected_ids.empty();
  } else if (stream.bernoulli(model.fpr())) {
    out.flagged = true;
    out.false_positive = true;
  }
  return out;
}

}  // namespace hive
