#include "relaysim/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace relaysim {

double channel_gain(const Vec3& p_x, const Vec3& p_y, double alpha) {
    double d = distance(p_x, p_y);
    if (d == 0.0) throw std::domain_error("channel_gain: coincident transmitter and receiver");
    return std::pow(d, -alpha);
}

double jamming_interference(const Vec3& p_rx, const std::vector<Jammer>& jammers, double alpha) {
    double total = 0.0;
    for (const Jammer& j : jammers) total += j.power * channel_gain(j.pos, p_rx, alpha);
    return total;
}

double co_channel_interference(const Vec3& rx, const std::vector<std::pair<Vec3, double>>& active_tx,
                               double alpha) {
    double total = 0.0;
    for (const auto& [pos, power] : active_tx) total += power * channel_gain(pos, rx, alpha);
    return total;
}

double sinr(const Vec3& p_tx, double tx_power, const Vec3& p_rx, double noise, double i_co,
            double i_jam, double alpha) {
    if (noise <= 0.0) throw std::invalid_argument("sinr: noise power must be positive");
    return tx_power * channel_gain(p_tx, p_rx, alpha) / (noise + i_co + i_jam);
}

double link_rate(double sinr_value, double bandwidth_hz) {
    return bandwidth_hz * std::log2(1.0 + sinr_value);
}

std::vector<int> assign_gcvs(const World& world) {
    std::vector<int> assignment(world.gcvs.size(), 0);
    for (size_t n = 0; n < world.gcvs.size(); ++n) {
        Vec3 mid = midpoint(world.gcvs[n].src_pos, world.gcvs[n].dst_pos);
        int best = 0;
        double best_d = distance(world.uavs[0].pos, mid);
        for (size_t i = 1; i < world.uavs.size(); ++i) {
            double d = distance(world.uavs[i].pos, mid);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(i);
            }
        }
        assignment[n] = best;
    }
    return assignment;
}

double pair_rate_assigned(int pair_idx, int relay_idx, const World& world, const RunConfig& cfg,
                          const std::vector<int>& assignment) {
    const GcvPair& pair = world.gcvs[pair_idx];
    const UavState& relay = world.uavs[relay_idx];
    double alpha = cfg.path_loss_alpha;

    // Uplink: S_n -> relay, interfered by every other source user.
    std::vector<std::pair<Vec3, double>> ul_tx;
    for (size_t m = 0; m < world.gcvs.size(); ++m)
        if (static_cast<int>(m) != pair_idx) ul_tx.emplace_back(world.gcvs[m].src_pos, cfg.gcv_tx_power);
    double ul_ico = co_channel_interference(relay.pos, ul_tx, alpha);
    double ul_ijam = jamming_interference(relay.pos, world.jammers, alpha);
    double ul_sinr = sinr(pair.src_pos, cfg.gcv_tx_power, relay.pos, cfg.noise_power, ul_ico, ul_ijam, alpha);
    double r_ul = link_rate(ul_sinr, cfg.bandwidth_hz);

    // Downlink: relay -> D_n, interfered by every other UAV currently relaying.
    std::vector<bool> transmitting(world.uavs.size(), false);
    for (int uav : assignment) transmitting[uav] = true;
    std::vector<std::pair<Vec3, double>> dl_tx;
    for (size_t v = 0; v < world.uavs.size(); ++v)
        if (static_cast<int>(v) != relay_idx && transmitting[v])
            dl_tx.emplace_back(world.uavs[v].pos, cfg.power_levels[world.uavs[v].power_index]);
    double dl_ico = co_channel_interference(pair.dst_pos, dl_tx, alpha);
    double dl_ijam = jamming_interference(pair.dst_pos, world.jammers, alpha);
    double dl_sinr = sinr(relay.pos, cfg.power_levels[relay.power_index], pair.dst_pos, cfg.noise_power,
                          dl_ico, dl_ijam, alpha);
    double r_dl = link_rate(dl_sinr, cfg.bandwidth_hz);

    return std::min(r_ul, r_dl);
}

double pair_rate(int pair_idx, int relay_idx, const World& world, const RunConfig& cfg) {
    return pair_rate_assigned(pair_idx, relay_idx, world, cfg, assign_gcvs(world));
}

std::vector<double> pair_rates(const World& world, const RunConfig& cfg,
                               const std::vector<int>& assignment) {
    std::vector<double> rates(world.gcvs.size());
    for (size_t n = 0; n < world.gcvs.size(); ++n)
        rates[n] = pair_rate_assigned(static_cast<int>(n), assignment[n], world, cfg, assignment);
    return rates;
}

}  // namespace relaysim
