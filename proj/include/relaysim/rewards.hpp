#pragma once

#include <vector>

#include "relaysim/action.hpp"
#include "relaysim/world.hpp"

namespace relaysim {

struct RewardWeights {
    double thr = 1.0;
    double coop = 0.2;
    double col = 2.0;
    double fly = 0.05;
};

struct IndividualCoeffs {
    double thr = 1.0;
    double assign = 0.1;
    double col = 1.0;
};

// One step's reward terms. global_r always equals the exact weighted
// recombination of the stored terms (throughput in normalized bits/s/Hz).
struct RewardBreakdown {
    double global_r = 0.0;
    std::vector<double> individual_r;
    double throughput_norm = 0.0;  // sum of pair rates / bandwidth
    double throughput_bps = 0.0;
    double coop_bonus = 0.0;
    double p_col = 0.0;
    double p_fly = 0.0;
};

// Sum over UAV pairs closer than d_safe of (1 - d/d_safe).
double collision_penalty(const World& world, double d_safe);

// Total per-step flight energy across the team, same model as the battery.
double flight_penalty(const std::vector<Action>& actions, const RunConfig& cfg);

// 0.5 * workload balance + 0.5 * spacing. Balance is 1 - Var(counts)/Var_max
// with Var_max the one-UAV-takes-all variance; spacing is the mean Gaussian
// kernel exp(-(d - d_ideal)^2 / (2 sigma_d^2)) over UAV pairs. Both terms are
// 1 when degenerate (single UAV).
double cooperation_bonus(const World& world, const std::vector<int>& assignment, const RunConfig& cfg);

double global_reward(double throughput_norm, double coop, double p_col, double p_fly,
                     const RewardWeights& w);

// alpha_thr * R_i + alpha_assign * B_assign(i) - alpha_col * P_col, with the
// shared (global) collision penalty.
double individual_reward(int agent_idx, double agent_throughput_norm,
                         const std::vector<int>& assignment, double p_col,
                         const IndividualCoeffs& c);

// Homeostatic curriculum: identity before curriculum_frac progress, then a
// multiplicative nudge of w_col/w_thr toward the collision-rate target,
// clamped to [weight_floor, weight_ceiling].
RewardWeights homeostatic_update(const RewardWeights& w, double recent_collision_rate,
                                 double recent_throughput, double progress, const RunConfig& cfg);

// Full reward evaluation for a post-action world.
RewardBreakdown step_rewards(const World& world, const std::vector<Action>& actions,
                             const std::vector<int>& assignment, const std::vector<double>& rates,
                             const RewardWeights& w, const IndividualCoeffs& c, const RunConfig& cfg);

}  // namespace relaysim
