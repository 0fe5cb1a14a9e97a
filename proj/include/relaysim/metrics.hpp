#pragma once

#include <string>
#include <vector>

#include "relaysim/rewards.hpp"

namespace relaysim {

// One row of the per-episode metrics CSV.
struct EpisodeMetrics {
    long long episode = 0;
    double mean_global_reward = 0.0;
    double smoothed_reward = 0.0;
    double throughput_norm = 0.0;   // mean per-step system throughput / bandwidth
    double throughput_bps = 0.0;
    double collision_penalty = 0.0; // summed over the episode
    double mean_jammer_distance = 0.0;
    double mean_individual_reward = 0.0;
    double epsilon = 0.0;
    RewardWeights weights;
};

extern const char* const kMetricsHeader;

// Fills smoothed_reward with the trailing moving average of mean_global_reward
// (shorter prefix windows average what exists).
void apply_smoothing(std::vector<EpisodeMetrics>& rows, int window);

// Writes the CSV: fixed header, full-precision floats, smoothed column
// recomputed with the given window. Zero rows yields a header-only file.
void export_metrics(const std::vector<EpisodeMetrics>& rows, const std::string& path,
                    int smoothing_window = 50);

}  // namespace relaysim
