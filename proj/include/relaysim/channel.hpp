#pragma once

#include <utility>
#include <vector>

#include "relaysim/world.hpp"

namespace relaysim {

// Path-loss gain ||p_x - p_y||^-alpha. Coincident points are a domain error.
double channel_gain(const Vec3& p_x, const Vec3& p_y, double alpha);

// Sum of power * gain over all jammers, as seen at the receiver.
double jamming_interference(const Vec3& p_rx, const std::vector<Jammer>& jammers, double alpha);

// Sum of power * gain over concurrent friendly transmitters. The intended
// transmitter of the link under evaluation must not be in the list.
double co_channel_interference(const Vec3& rx, const std::vector<std::pair<Vec3, double>>& active_tx,
                               double alpha);

// P * G / (noise + I_co + I_jam). Nonpositive noise is a config error.
double sinr(const Vec3& p_tx, double tx_power, const Vec3& p_rx, double noise, double i_co,
            double i_jam, double alpha);

// Shannon rate W * log2(1 + sinr), bits/s.
double link_rate(double sinr_value, double bandwidth_hz);

// Each pair goes to the UAV nearest its source/destination midpoint, ties to
// the lowest UAV index. Returned vector maps pair index -> UAV index.
std::vector<int> assign_gcvs(const World& world);

// Bottleneck rate min(uplink, downlink) of one relayed pair, bits/s.
// Uplink: source -> relay at gcv_tx_power, co-channel from all other sources.
// Downlink: relay -> destination at the relay's commanded power level,
// co-channel from every other UAV that is relaying at least one pair. The two
// hops are frequency separated, so a relay never interferes with its own
// reception. Jamming hits both hops.
double pair_rate(int pair_idx, int relay_idx, const World& world, const RunConfig& cfg);

// Same, with the assignment (who else is transmitting) supplied by the caller.
double pair_rate_assigned(int pair_idx, int relay_idx, const World& world, const RunConfig& cfg,
                          const std::vector<int>& assignment);

// Rates of all pairs under an assignment.
std::vector<double> pair_rates(const World& world, const RunConfig& cfg,
                               const std::vector<int>& assignment);

}  // namespace relaysim
