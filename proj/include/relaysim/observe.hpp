#pragma once

#include <vector>

#include "relaysim/world.hpp"

namespace relaysim {

// Local observation, length 5 + 5 * k_nearest:
//   [ x/L, y/L, z/h_max, energy fraction, tau_stay/episode_length ]
// then per nearest pair (midpoint distance ascending, ties by pair index):
//   [ (mid - pos)/scale (3), gain to source, gain to destination ]
// Relative components share the own-position scales, so a pair directly below
// the agent contributes (0, 0, -z/h_max).
std::vector<double> observe(const World& world, int agent_idx, const RunConfig& cfg);

// Global state, length 5 * n_uavs + 4 * n_pairs: per UAV raw position,
// energy fraction, tau_stay/episode_length; per pair raw src x,y and dst x,y.
// Positions are stored unscaled so the state decodes back to the world.
std::vector<double> global_state(const World& world, const RunConfig& cfg);

// Pair indices sorted by distance from the agent to each pair midpoint,
// ascending, ties by index; the first k_nearest feed the observation.
std::vector<int> nearest_pairs(const World& world, int agent_idx);

}  // namespace relaysim
