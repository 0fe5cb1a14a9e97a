#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "relaysim/channel.hpp"
#include "relaysim/config.hpp"
#include "relaysim/world.hpp"

namespace relaysim::testutil {

inline double rel_err(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

// World shell matching cfg bounds with jammers installed and no UAVs/pairs.
inline World empty_world(const RunConfig& cfg) {
    World w;
    w.area_side = cfg.area_side;
    w.h_min = cfg.h_min;
    w.h_max = cfg.h_max;
    for (const Vec3& p : cfg.jammer_positions) w.jammers.push_back({p, cfg.jammer_power});
    return w;
}

inline UavState uav_at(double x, double y, double z, double energy = 1e4, int power_index = 0) {
    UavState u;
    u.pos = {x, y, z};
    u.energy = energy;
    u.power_index = power_index;
    return u;
}

inline GcvPair pair_at(double sx, double sy, double dx, double dy) {
    GcvPair p;
    p.src_pos = {sx, sy, 0.0};
    p.dst_pos = {dx, dy, 0.0};
    p.src_vel = {0.0, 0.0, 0.0};
    p.dst_vel = {0.0, 0.0, 0.0};
    return p;
}

// Straight-line recomputation of the two-hop bottleneck rate from raw
// coordinates. Shares no code with the implementation under test.
inline double oracle_pair_rate(int pair_idx, int relay_idx, const World& w, const RunConfig& cfg,
                               const std::vector<int>& assignment) {
    auto gain = [&](const Vec3& a, const Vec3& b) {
        const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
        return std::pow(std::sqrt(dx * dx + dy * dy + dz * dz), -cfg.path_loss_alpha);
    };
    const Vec3& relay = w.uavs[relay_idx].pos;
    const Vec3& src = w.gcvs[pair_idx].src_pos;
    const Vec3& dst = w.gcvs[pair_idx].dst_pos;

    double ul_i = 0.0;
    for (size_t m = 0; m < w.gcvs.size(); ++m)
        if (static_cast<int>(m) != pair_idx) ul_i += cfg.gcv_tx_power * gain(w.gcvs[m].src_pos, relay);
    double ul_jam = 0.0;
    for (const Jammer& j : w.jammers) ul_jam += j.power * gain(j.pos, relay);
    const double ul_sinr =
        cfg.gcv_tx_power * gain(src, relay) / (cfg.noise_power + ul_i + ul_jam);
    const double r_ul = cfg.bandwidth_hz * std::log2(1.0 + ul_sinr);

    std::vector<bool> tx(w.uavs.size(), false);
    for (int uav : assignment) tx[uav] = true;
    double dl_i = 0.0;
    for (size_t v = 0; v < w.uavs.size(); ++v)
        if (static_cast<int>(v) != relay_idx && tx[v])
            dl_i += cfg.power_levels[w.uavs[v].power_index] * gain(w.uavs[v].pos, dst);
    double dl_jam = 0.0;
    for (const Jammer& j : w.jammers) dl_jam += j.power * gain(j.pos, dst);
    const double dl_sinr = cfg.power_levels[w.uavs[relay_idx].power_index] * gain(relay, dst) /
                           (cfg.noise_power + dl_i + dl_jam);
    const double r_dl = cfg.bandwidth_hz * std::log2(1.0 + dl_sinr);

    return std::min(r_ul, r_dl);
}

inline std::vector<int> oracle_assign(const World& w) {
    std::vector<int> out(w.gcvs.size(), 0);
    for (size_t n = 0; n < w.gcvs.size(); ++n) {
        const Vec3 mid{0.5 * (w.gcvs[n].src_pos.x + w.gcvs[n].dst_pos.x),
                       0.5 * (w.gcvs[n].src_pos.y + w.gcvs[n].dst_pos.y),
                       0.5 * (w.gcvs[n].src_pos.z + w.gcvs[n].dst_pos.z)};
        int best = 0;
        double best_d = (w.uavs[0].pos - mid).norm();
        for (size_t i = 1; i < w.uavs.size(); ++i) {
            const double d = (w.uavs[i].pos - mid).norm();
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(i);
            }
        }
        out[n] = best;
    }
    return out;
}

}  // namespace relaysim::testutil
