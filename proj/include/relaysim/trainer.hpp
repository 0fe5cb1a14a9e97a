#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relaysim/agents.hpp"
#include "relaysim/config.hpp"
#include "relaysim/metrics.hpp"

namespace relaysim {

// End-to-end training: fixed-length episodes, masked epsilon-greedy rollout,
// prioritized replay, one critic + per-agent actor update per step after
// warmup, periodic soft target updates, homeostatic reward-weight adaptation
// at episode ends. Writes checkpoint_<step>.bin snapshots plus
// checkpoint_final.bin under out_dir (skipped when out_dir is empty), appends
// one metrics row per episode to *metrics_out, and returns the trained bundle.
// Deterministic given (cfg, seed). Throws std::runtime_error if a loss turns
// non-finite.
CtdeAgents train(const RunConfig& cfg, uint64_t seed, const std::string& out_dir,
                 std::vector<EpisodeMetrics>* metrics_out);

// Exploration schedule: linear from eps_start to eps_final over the first
// eps_decay_frac of total steps, constant afterwards.
double epsilon_at(long long step, const RunConfig& cfg);

// Importance-sampling exponent: linear from per_beta_start to per_beta_end
// over the whole run.
double beta_at(long long step, const RunConfig& cfg);

}  // namespace relaysim
