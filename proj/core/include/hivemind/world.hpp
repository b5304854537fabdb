#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hivemind/geometry.hpp"
#include "hivemind/rng.hpp"
#include "hivemind/sim_time.hpp"

namespace hive {

struct Field {
  double width = 0.0;
  double height = 0.0;
  Rect rect() const { return {0.0, 0.0, width, height}; }
};

enum class TargetKind { item, person };

struct TargetObject {
  int id = 0;
  TargetKind kind = TargetKind::item;
  Point base;  // item position, or the person's starting point
};

// Parametric recognizer. Retraining feedback decays the error rates
// exponentially in the number of feedback samples, floored.
struct DetectionModel {
  double tpr0 = 1.0;
  double fpr0 = 0.0;
  double floor_fpr = 0.0;
  double floor_fnr = 0.0;
  double kappa_fp = 5.0;
  double kappa_fn = 5.0;
  int feedback_fp = 0;
  int feedback_fn = 0;
  LognormalSpec latency_ms;

  double fpr() const;
  double fnr() const;
  double tpr() const { return 1.0 - fnr(); }
  void apply_feedback(int fp_samples, int fn_samples);
};

struct PhotoRecord {
  std::int64_t photo_id = 0;
  int device_id = 0;
  SimTime capture_time = 0;
  Point center;
  double footprint_w = 0.0;
  double footprint_h = 0.0;
  std::int64_t size_bytes = 0;
  std::vector<int> ground_truth_ids;
  // Persons among ground_truth_ids whose face was at least partly visible,
  // sampled once at capture time.
  std::vector<int> face_visible_ids;
};

struct DetectionOutcome {
  bool flagged = false;
  std::vector<int> detected_ids;
  bool false_positive = false;
};

// Deterministic seeded waypoint walk: pick a uniform waypoint, move toward
// it at constant speed, dwell, repeat. Pure function of (seed, person id, t).
class PersonWalk {
 public:
  PersonWalk(const Field& field, std::uint64_t master_seed, int person_id, double speed_mps,
             double max_dwell_s);

  Point position_at(SimTime t) const;
  Point start() const;

 private:
  struct Segment {
    SimTime t0;
    SimTime t1;
    Point from;
    Point to;  // from == to while dwelling
  };
  void extend_to(SimTime t) const;

  Field field_;
  double speed_;
  double max_dwell_s_;
  mutable RngStream rng_;
  mutable std::vector<Segment> segments_;
};

struct WorldConfig {
  Field field{96.0, 96.0};
  int item_count = 15;
  int person_count = 25;
  double min_item_separation_m = 2.0;
  double person_speed_mps = 1.2;
  double person_max_dwell_s = 5.0;
  double face_visible_prob = 0.8;
};

// Scenario ground truth: placed items, moving people, footprint queries,
// and detection-outcome sampling.
class World {
 public:
  World(const WorldConfig& cfg, std::uint64_t master_seed);

  const WorldConfig& config() const { return cfg_; }
  const std::vector<TargetObject>& objects() const { return objects_; }
  Point object_position(int id, SimTime t) const;
  std::vector<int> objects_in_footprint(Point center, double w, double h, SimTime t) const;
  DetectionOutcome sample_detection(const DetectionModel& model, const PhotoRecord& photo,
                                    RngStream& stream) const;
  bool is_person(int id) const;

  // Exposed for the placement oracle in tests.
  static std::vector<Point> place_items(const Field& field, int n, double min_separation,
                                        RngStream& stream);

 private:
  WorldConfig cfg_;
  std::vector<TargetObject> objects_;
  std::vector<PersonWalk> walks_;  // indexed by person-object order
  int first_person_id_ = 0;
};

}  // namespace hive
