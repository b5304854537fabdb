#include "hivemind/runlog.hpp"

#include "hivemind/engine.hpp"

namespace hive {

const char* photo_disposition_name(PhotoDisposition d) {
  switch (d) {
    case PhotoDisposition::in_flight: return "in_flight";
    case PhotoDisposition::delivered: return "delivered";
    case PhotoDisposition::stored: return "stored";
    case PhotoDisposition::lost: return "lost";
  }
  return "?";
}

PhotoLogEntry& RunLog::photo_entry(std::int64_t photo_id) {
  for (auto it = photos.rbegin(); it != photos.rend(); ++it) {
    if (it->photo.photo_id == photo_id) return *it;
  }
  throw SimError("run log: unknown photo id " + std::to_string(photo_id));
}

}  // namespace hive
