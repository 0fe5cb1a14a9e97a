#include "relaysim/metrics.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace relaysim {

const char* const kMetricsHeader =
    "episode,mean_global_reward,smoothed_reward,throughput_norm,throughput_bps,"
    "collision_penalty,mean_jammer_distance,mean_individual_reward,epsilon,"
    "w_thr,w_coop,w_col,w_fly";

void apply_smoothing(std::vector<EpisodeMetrics>& rows, int window) {
    if (window <= 0) throw std::invalid_argument("smoothing window must be positive");
    double running = 0.0;
    for (size_t i = 0; i < rows.size(); ++i) {
        running += rows[i].mean_global_reward;
        if (i >= static_cast<size_t>(window)) running -= rows[i - window].mean_global_reward;
        const size_t n = std::min(i + 1, static_cast<size_t>(window));
        rows[i].smoothed_reward = running / n;
    }
}

void export_metrics(const std::vector<EpisodeMetrics>& rows, const std::string& path,
                    int smoothing_window) {
    std::vector<EpisodeMetrics> smoothed = rows;
    apply_smoothing(smoothed, smoothing_window);
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open metrics file for writing: " + path);
    out << kMetricsHeader << '\n';
    char buf[512];
    for (const EpisodeMetrics& r : smoothed) {
        std::snprintf(buf, sizeof(buf),
                      "%lld,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g",
                      r.episode, r.mean_global_reward, r.smoothed_reward, r.throughput_norm,
                      r.throughput_bps, r.collision_penalty, r.mean_jammer_distance,
                      r.mean_individual_reward, r.epsilon, r.weights.thr, r.weights.coop,
                      r.weights.col, r.weights.fly);
        out << buf << '\n';
    }
    if (!out) throw std::runtime_error("metrics write failed: " + path);
}

}  // namespace relaysim
