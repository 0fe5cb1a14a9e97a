#include "relaysim/observe.hpp"

#include <algorithm>
#include <numeric>

#include "relaysim/channel.hpp"

namespace relaysim {

std::vector<int> nearest_pairs(const World& world, int agent_idx) {
    const Vec3& pos = world.uavs[agent_idx].pos;
    std::vector<int> order(world.gcvs.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> dist(world.gcvs.size());
    for (size_t n = 0; n < world.gcvs.size(); ++n)
        dist[n] = distance(pos, midpoint(world.gcvs[n].src_pos, world.gcvs[n].dst_pos));
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return dist[a] < dist[b]; });
    return order;
}

std::vector<double> observe(const World& world, int agent_idx, const RunConfig& cfg) {
    const UavState& uav = world.uavs[agent_idx];
    std::vector<double> v;
    v.reserve(cfg.obs_dim());

    v.push_back(uav.pos.x / cfg.area_side);
    v.push_back(uav.pos.y / cfg.area_side);
    v.push_back(uav.pos.z / cfg.h_max);
    v.push_back(uav.energy / cfg.initial_energy);
    v.push_back(static_cast<double>(uav.tau_stay) / cfg.episode_length);

    std::vector<int> order = nearest_pairs(world, agent_idx);
    for (int k = 0; k < cfg.k_nearest; ++k) {
        const GcvPair& pair = world.gcvs[order[k]];
        Vec3 mid = midpoint(pair.src_pos, pair.dst_pos);
        v.push_back((mid.x - uav.pos.x) / cfg.area_side);
        v.push_back((mid.y - uav.pos.y) / cfg.area_side);
        v.push_back((mid.z - uav.pos.z) / cfg.h_max);
        v.push_back(channel_gain(uav.pos, pair.src_pos, cfg.path_loss_alpha));
        v.push_back(channel_gain(uav.pos, pair.dst_pos, cfg.path_loss_alpha));
    }
    return v;
}

std::vector<double> global_state(const World& world, const RunConfig& cfg) {
    std::vector<double> v;
    v.reserve(cfg.state_dim());
    for (const UavState& uav : world.uavs) {
        v.push_back(uav.pos.x);
        v.push_back(uav.pos.y);
        v.push_back(uav.pos.z);
        v.push_back(uav.energy / cfg.initial_energy);
        v.push_back(static_cast<double>(uav.tau_stay) / cfg.episode_length);
    }
    for (const GcvPair& pair : world.gcvs) {
        v.push_back(pair.src_pos.x);
        v.push_back(pair.src_pos.y);
        v.push_back(pair.dst_pos.x);
        v.push_back(pair.dst_pos.y);
    }
    return v;
}

}  // namespace relaysim
