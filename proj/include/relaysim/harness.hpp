#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relaysim/baselines.hpp"
#include "relaysim/config.hpp"
#include "relaysim/metrics.hpp"

namespace relaysim {

// Rolls fixed-length episodes under one policy and records one metrics row
// per episode. Fully determined by (cfg, policy, seed); exploration is off
// (trained actors run greedy), reward weights stay at their configured values.
std::vector<EpisodeMetrics> run_eval(const RunConfig& cfg, Policy& policy, int episodes,
                                     uint64_t seed);

// Name-based variant; "ctde" loads the checkpoint, heuristics ignore it.
std::vector<EpisodeMetrics> run_eval(const RunConfig& cfg, const std::string& policy_name,
                                     const std::string& checkpoint_path, int episodes,
                                     uint64_t seed);

// Records how a run was invoked: '#'-prefixed header lines (mode, seed, any
// extras) followed by the full resolved config. The file parses as a config.
void write_manifest(const RunConfig& cfg, uint64_t seed, const std::string& mode,
                    const std::vector<std::string>& extra_lines, const std::string& path);

}  // namespace relaysim
