#include "relaysim/world.hpp"

#include <cmath>
#include <numbers>

namespace relaysim {

Vec3 draw_ground_velocity(Rng& rng, const RunConfig& cfg) {
    double heading = rng.uniform(0.0, 2.0 * std::numbers::pi);
    double speed = rng.uniform(0.0, cfg.gcv_speed_max);
    return {speed * std::cos(heading), speed * std::sin(heading), 0.0};
}

World make_world(const RunConfig& cfg, Rng& rng) {
    World w;
    w.area_side = cfg.area_side;
    w.h_min = cfg.h_min;
    w.h_max = cfg.h_max;
    w.step_count = 0;

    for (const Vec3& p : cfg.jammer_positions) w.jammers.push_back({p, cfg.jammer_power});

    w.uavs.reserve(cfg.n_uavs);
    for (int i = 0; i < cfg.n_uavs; ++i) {
        // Keep spawns at least d_safe apart so episodes start collision free.
        Vec3 pos;
        const int max_attempts = 200;
        for (int attempt = 0; attempt < max_attempts; ++attempt) {
            pos = {rng.uniform(0.0, cfg.area_side), rng.uniform(0.0, cfg.area_side),
                   rng.uniform(cfg.h_min, cfg.h_max)};
            bool clear = true;
            for (const UavState& other : w.uavs)
                if (distance(pos, other.pos) < cfg.d_safe) clear = false;
            if (clear) break;
        }
        w.uavs.push_back({pos, cfg.initial_energy, 0, 0});
    }

    w.gcvs.reserve(cfg.n_pairs);
    for (int n = 0; n < cfg.n_pairs; ++n) {
        GcvPair pair;
        pair.src_pos = {rng.uniform(0.0, cfg.area_side), rng.uniform(0.0, cfg.area_side), 0.0};
        pair.dst_pos = {rng.uniform(0.0, cfg.area_side), rng.uniform(0.0, cfg.area_side), 0.0};
        pair.src_vel = draw_ground_velocity(rng, cfg);
        pair.dst_vel = draw_ground_velocity(rng, cfg);
        w.gcvs.push_back(pair);
    }
    return w;
}

}  // namespace relaysim
