#include "relaysim/rewards.hpp"

#include <algorithm>
#include <cmath>

#include "relaysim/dynamics.hpp"

namespace relaysim {

double collision_penalty(const World& world, double d_safe) {
    double total = 0.0;
    for (size_t i = 0; i < world.uavs.size(); ++i) {
        for (size_t j = i + 1; j < world.uavs.size(); ++j) {
            double d = distance(world.uavs[i].pos, world.uavs[j].pos);
            if (d < d_safe) total += 1.0 - d / d_safe;
        }
    }
    return total;
}

double flight_penalty(const std::vector<Action>& actions, const RunConfig& cfg) {
    double total = 0.0;
    for (const Action& a : actions) total += step_energy(a, cfg);
    return total;
}

double cooperation_bonus(const World& world, const std::vector<int>& assignment, const RunConfig& cfg) {
    const int n_uavs = static_cast<int>(world.uavs.size());
    const int n_pairs = static_cast<int>(assignment.size());

    // Workload balance: population variance of assignment counts against the
    // worst case where one UAV holds every pair.
    double balance = 1.0;
    if (n_uavs > 1) {
        std::vector<double> counts(n_uavs, 0.0);
        for (int uav : assignment) counts[uav] += 1.0;
        double mean = static_cast<double>(n_pairs) / n_uavs;
        double var = 0.0;
        for (double c : counts) var += (c - mean) * (c - mean);
        var /= n_uavs;
        double var_max = ((n_pairs - mean) * (n_pairs - mean) + (n_uavs - 1) * mean * mean) / n_uavs;
        balance = (var_max > 0.0) ? 1.0 - var / var_max : 1.0;
    }

    double spacing = 1.0;
    if (n_uavs > 1) {
        double sum = 0.0;
        int count = 0;
        for (int i = 0; i < n_uavs; ++i) {
            for (int j = i + 1; j < n_uavs; ++j) {
                double d = distance(world.uavs[i].pos, world.uavs[j].pos);
                double dev = d - cfg.d_ideal;
                sum += std::exp(-dev * dev / (2.0 * cfg.sigma_d * cfg.sigma_d));
                ++count;
            }
        }
        spacing = sum / count;
    }

    return 0.5 * balance + 0.5 * spacing;
}

double global_reward(double throughput_norm, double coop, double p_col, double p_fly,
                     const RewardWeights& w) {
    return w.thr * throughput_norm + w.coop * coop - w.col * p_col - w.fly * p_fly;
}

double individual_reward(int agent_idx, double agent_throughput_norm,
                         const std::vector<int>& assignment, double p_col,
                         const IndividualCoeffs& c) {
    double b_assign = 0.0;
    for (int uav : assignment)
        if (uav == agent_idx) b_assign += 1.0;
    return c.thr * agent_throughput_norm + c.assign * b_assign - c.col * p_col;
}

RewardWeights homeostatic_update(const RewardWeights& w, double recent_collision_rate,
                                 double /*recent_throughput*/, double progress, const RunConfig& cfg) {
    if (progress < cfg.curriculum_frac) return w;

    auto clamp = [&](double v) { return std::clamp(v, cfg.weight_floor, cfg.weight_ceiling); };
    RewardWeights out = w;
    if (recent_collision_rate < cfg.collision_rate_target) {
        // Safe enough: shift emphasis from collision avoidance to throughput.
        out.col = clamp(w.col * 0.99);
        out.thr = clamp(w.thr * 1.01);
    } else {
        out.col = clamp(w.col * 1.01);
        out.thr = clamp(w.thr * 0.99);
    }
    return out;
}

RewardBreakdown step_rewards(const World& world, const std::vector<Action>& actions,
                             const std::vector<int>& assignment, const std::vector<double>& rates,
                             const RewardWeights& w, const IndividualCoeffs& c, const RunConfig& cfg) {
    RewardBreakdown out;
    for (double r : rates) out.throughput_bps += r;
    out.throughput_norm = out.throughput_bps / cfg.bandwidth_hz;
    out.coop_bonus = cooperation_bonus(world, assignment, cfg);
    out.p_col = collision_penalty(world, cfg.d_safe);
    out.p_fly = flight_penalty(actions, cfg);
    out.global_r = global_reward(out.throughput_norm, out.coop_bonus, out.p_col, out.p_fly, w);

    out.individual_r.resize(world.uavs.size());
    for (size_t i = 0; i < world.uavs.size(); ++i) {
        double own = 0.0;
        for (size_t n = 0; n < assignment.size(); ++n)
            if (assignment[n] == static_cast<int>(i)) own += rates[n];
        out.individual_r[i] =
            individual_reward(static_cast<int>(i), own / cfg.bandwidth_hz, assignment, out.p_col, c);
    }
    return out;
}

}  // namespace relaysim
