#include "relaysim/dynamics.hpp"

#include <algorithm>
#include <stdexcept>

namespace relaysim {

Vec3 move_delta(Move m, const RunConfig& cfg) {
    switch (m) {
        case Move::Stay: return {0.0, 0.0, 0.0};
        case Move::North: return {0.0, cfg.step_xy, 0.0};
        case Move::South: return {0.0, -cfg.step_xy, 0.0};
        case Move::East: return {cfg.step_xy, 0.0, 0.0};
        case Move::West: return {-cfg.step_xy, 0.0, 0.0};
        case Move::Up: return {0.0, 0.0, cfg.step_z};
        case Move::Down: return {0.0, 0.0, -cfg.step_z};
    }
    return {0.0, 0.0, 0.0};
}

double step_energy(const Action& a, const RunConfig& cfg) {
    double e = cfg.energy_hover;
    if (a.move != Move::Stay) e += cfg.energy_move;
    if (a.move == Move::Up) e += cfg.energy_climb;
    return e;
}

World apply_actions(const World& world, const std::vector<Action>& actions, const RunConfig& cfg) {
    if (actions.size() != world.uavs.size())
        throw std::invalid_argument("apply_actions: one action per UAV required");

    World next = world;
    for (size_t i = 0; i < next.uavs.size(); ++i) {
        UavState& uav = next.uavs[i];
        const Action& a = actions[i];

        Vec3 p = uav.pos + move_delta(a.move, cfg);
        p.x = std::clamp(p.x, 0.0, world.area_side);
        p.y = std::clamp(p.y, 0.0, world.area_side);
        p.z = std::clamp(p.z, world.h_min, world.h_max);
        uav.pos = p;

        uav.tau_stay = (a.move == Move::Stay) ? uav.tau_stay + 1 : 0;
        uav.energy = std::max(0.0, uav.energy - step_energy(a, cfg));
        uav.power_index = a.power_index;
    }
    next.step_count = world.step_count + 1;
    return next;
}

namespace {

// Reflects x into [0, hi], flipping the velocity component on each bounce.
void reflect(double& x, double& v, double hi) {
    while (x < 0.0 || x > hi) {
        if (x < 0.0) {
            x = -x;
            v = -v;
        } else {
            x = 2.0 * hi - x;
            v = -v;
        }
    }
}

}  // namespace

World step_gcvs(const World& world, Rng& rng, const RunConfig& cfg) {
    World next = world;
    for (GcvPair& pair : next.gcvs) {
        pair.src_pos = pair.src_pos + pair.src_vel;
        pair.dst_pos = pair.dst_pos + pair.dst_vel;
        reflect(pair.src_pos.x, pair.src_vel.x, next.area_side);
        reflect(pair.src_pos.y, pair.src_vel.y, next.area_side);
        reflect(pair.dst_pos.x, pair.dst_vel.x, next.area_side);
        reflect(pair.dst_pos.y, pair.dst_vel.y, next.area_side);
        pair.src_pos.z = 0.0;
        pair.dst_pos.z = 0.0;
    }
    if (next.step_count % cfg.gcv_turn_period == 0) {
        for (GcvPair& pair : next.gcvs) {
            pair.src_vel = draw_ground_velocity(rng, cfg);
            pair.dst_vel = draw_ground_velocity(rng, cfg);
        }
    }
    return next;
}

ActionMask safety_mask(const World& world, int agent_idx, const RunConfig& cfg) {
    ActionMask mask{};
    const Vec3& pos = world.uavs[agent_idx].pos;
    for (int m = 0; m < kNumMoves; ++m) {
        Move move = static_cast<Move>(m);
        bool allowed = true;
        if (move != Move::Stay) {
            Vec3 p = pos + move_delta(move, cfg);
            if (p.x < 0.0 || p.x > world.area_side || p.y < 0.0 || p.y > world.area_side ||
                p.z < world.h_min || p.z > world.h_max)
                allowed = false;
            for (size_t j = 0; allowed && j < world.uavs.size(); ++j) {
                if (static_cast<int>(j) == agent_idx) continue;
                if (distance(p, world.uavs[j].pos) < cfg.d_safe) allowed = false;
            }
        }
        for (int p = 0; p < kNumPowers; ++p) mask[m * kNumPowers + p] = allowed;
    }
    return mask;
}

}  // namespace relaysim
