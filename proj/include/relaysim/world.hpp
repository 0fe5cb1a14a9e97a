#pragma once

#include <vector>

#include "relaysim/config.hpp"
#include "relaysim/geometry.hpp"
#include "relaysim/rng.hpp"

namespace relaysim {

struct UavState {
    Vec3 pos;
    double energy = 0.0;   // remaining battery, clamped at 0
    int tau_stay = 0;      // consecutive Stay steps
    int power_index = 0;   // last commanded transmit power level
};

struct GcvPair {
    Vec3 src_pos;  // z = 0
    Vec3 dst_pos;  // z = 0
    Vec3 src_vel;  // z component 0
    Vec3 dst_vel;
};

struct Jammer {
    Vec3 pos;
    double power = 0.0;  // W, constant
};

struct World {
    std::vector<UavState> uavs;
    std::vector<GcvPair> gcvs;
    std::vector<Jammer> jammers;
    double area_side = 0.0;
    double h_min = 0.0;
    double h_max = 0.0;
    long long step_count = 0;
};

// Fresh episode state: UAVs placed uniformly in bounds with pairwise spacing
// of at least d_safe (rejection sampled), ground nodes uniform in the ground
// area with random initial velocities, jammers straight from the config.
World make_world(const RunConfig& cfg, Rng& rng);

// Heading uniform in [0, 2pi), speed uniform in [0, gcv_speed_max]. Consumed
// in (src, dst) order per pair, pairs ascending.
Vec3 draw_ground_velocity(Rng& rng, const RunConfig& cfg);

}  // namespace relaysim
