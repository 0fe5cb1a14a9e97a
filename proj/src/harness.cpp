#include "relaysim/harness.hpp"

#include <fstream>
#include <stdexcept>

#include "relaysim/channel.hpp"
#include "relaysim/dynamics.hpp"
#include "relaysim/observe.hpp"
#include "relaysim/rewards.hpp"

namespace relaysim {

namespace {

double mean_jammer_distance(const World& world) {
    if (world.jammers.empty() || world.uavs.empty()) return 0.0;
    double sum = 0.0;
    for (const UavState& u : world.uavs)
        for (const Jammer& j : world.jammers) sum += distance(u.pos, j.pos);
    return sum / (world.uavs.size() * world.jammers.size());
}

}  // namespace

std::vector<EpisodeMetrics> run_eval(const RunConfig& cfg, Policy& policy, int episodes,
                                     uint64_t seed) {
    if (episodes <= 0) throw std::invalid_argument("run_eval: episodes must be positive");
    cfg.validate();
    Rng rng(seed);
    const RewardWeights weights{cfg.w_thr, cfg.w_coop, cfg.w_col, cfg.w_fly};
    const IndividualCoeffs coeffs{cfg.alpha_thr, cfg.alpha_assign, cfg.alpha_col};
    std::vector<EpisodeMetrics> rows;
    rows.reserve(episodes);
    std::vector<Action> actions(cfg.n_uavs);
    for (int ep = 0; ep < episodes; ++ep) {
        World world = make_world(cfg, rng);
        double sum_global = 0.0, sum_thr_norm = 0.0, sum_thr_bps = 0.0, sum_col = 0.0;
        double sum_indiv = 0.0, sum_jam = 0.0;
        for (int step = 0; step < cfg.episode_length; ++step) {
            for (int i = 0; i < cfg.n_uavs; ++i) {
                const ActionMask mask = safety_mask(world, i, cfg);
                const std::vector<double> obs = observe(world, i, cfg);
                actions[i] = policy.act(world, i, obs, mask, rng);
            }
            world = apply_actions(world, actions, cfg);
            world = step_gcvs(world, rng, cfg);
            const std::vector<int> assignment = assign_gcvs(world);
            const std::vector<double> rates = pair_rates(world, cfg, assignment);
            const RewardBreakdown rb = step_rewards(world, actions, assignment, rates, weights,
                                                    coeffs, cfg);
            sum_global += rb.global_r;
            sum_thr_norm += rb.throughput_norm;
            sum_thr_bps += rb.throughput_bps;
            sum_col += rb.p_col;
            for (double r : rb.individual_r) sum_indiv += r;
            sum_jam += mean_jammer_distance(world);
        }
        EpisodeMetrics row;
        row.episode = ep;
        const double steps = cfg.episode_length;
        row.mean_global_reward = sum_global / steps;
        row.throughput_norm = sum_thr_norm / steps;
        row.throughput_bps = sum_thr_bps / steps;
        row.collision_penalty = sum_col;
        row.mean_jammer_distance = sum_jam / steps;
        row.mean_individual_reward = sum_indiv / (steps * cfg.n_uavs);
        row.epsilon = 0.0;
        row.weights = weights;
        rows.push_back(row);
    }
    apply_smoothing(rows, cfg.smoothing_window);
    return rows;
}

std::vector<EpisodeMetrics> run_eval(const RunConfig& cfg, const std::string& policy_name,
                                     const std::string& checkpoint_path, int episodes,
                                     uint64_t seed) {
    std::unique_ptr<Policy> policy = make_policy(policy_name, cfg, checkpoint_path);
    return run_eval(cfg, *policy, episodes, seed);
}

void write_manifest(const RunConfig& cfg, uint64_t seed, const std::string& mode,
                    const std::vector<std::string>& extra_lines, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open manifest for writing: " + path);
    out << "# mode: " << mode << '\n';
    out << "# seed: " << seed << '\n';
    for (const std::string& line : extra_lines) out << "# " << line << '\n';
    out << config_to_text(cfg);
    if (!out) throw std::runtime_error("manifest write failed: " + path);
}

}  // namespace relaysim
