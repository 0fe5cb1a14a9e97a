#pragma once

#include "relaysim/action.hpp"
#include "relaysim/world.hpp"

namespace relaysim {

// Displacement of one move primitive in meters.
Vec3 move_delta(Move m, const RunConfig& cfg);

// Energy drawn by one step: hover always, plus move/climb surcharges keyed on
// the commanded primitive (not on whether clamping let the UAV travel).
double step_energy(const Action& a, const RunConfig& cfg);

// Applies one action per UAV: displace, clamp to bounds, update tau_stay and
// energy, record the commanded power level, advance the step counter.
World apply_actions(const World& world, const std::vector<Action>& actions, const RunConfig& cfg);

// Advances ground nodes by their velocities with reflection at the area edge;
// re-draws every velocity each gcv_turn_period steps.
World step_gcvs(const World& world, Rng& rng, const RunConfig& cfg);

// Action allowed iff the displaced position (before clamping) stays in bounds
// and keeps at least d_safe from every other UAV's current position. Stay is
// always allowed; power variants share their move's flag.
ActionMask safety_mask(const World& world, int agent_idx, const RunConfig& cfg);

}  // namespace relaysim
