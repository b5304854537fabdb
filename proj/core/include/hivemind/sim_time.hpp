#pragma once

#include <cmath>
#include <cstdint>

namespace hive {

// Virtual time in integer microseconds. All public interfaces speak
// milliseconds or seconds; the integer base keeps event ordering exact.
using SimTime = std::int64_t;

inline constexpr SimTime kUsPerMs = 1000;
inline constexpr SimTime kUsPerS = 1'000'000;

inline SimTime from_ms(double ms) { return static_cast<SimTime>(std::llround(ms * kUsPerMs)); }
inline SimTime from_s(double s) { return static_cast<SimTime>(std::llround(s * kUsPerS)); }
inline constexpr double to_ms(SimTime t) { return static_cast<double>(t) / kUsPerMs; }
inline constexpr double to_s(SimTime t) { return static_cast<double>(t) / kUsPerS; }

}  // namespace hive
