#pragma once

#include <string>
#include <vector>

#include "hivemind/config.hpp"
#include "hivemind/summary.hpp"

namespace hive {

// One mission's deliverables. The summary is computed from the same rows the
// CSV serializes, so parsing the CSV and re-summarizing reproduces it exactly.
struct MissionArtifacts {
  std::string run_id;
  RunSummary summary;
  std::string trace_csv;
};

struct RunResult {
  std::vector<MissionArtifacts> missions;
  const MissionArtifacts& last() const { return missions.back(); }
  int exit_code() const { return missions.back().summary.exit_code(); }
};

// Assembles a full experiment (engine, world, channel, cluster, devices,
// controller), runs each mission to event-queue quiescence, and carries
// detection-model feedback across missions when configured.
RunResult run_experiment(const ExperimentConfig& cfg);

}  // namespace hive
