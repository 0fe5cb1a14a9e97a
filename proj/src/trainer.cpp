#include "relaysim/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>

#include "relaysim/channel.hpp"
#include "relaysim/checkpoint.hpp"
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

// Fraction of flagged steps and mean throughput over a sliding step window.
class StepWindow {
public:
    StepWindow(int capacity) : capacity_(capacity) {}

    void push(bool collided, double throughput) {
        entries_.push_back({collided, throughput});
        if (collided) ++collisions_;
        thr_sum_ += throughput;
        if (static_cast<int>(entries_.size()) > capacity_) {
            if (entries_.front().collided) --collisions_;
            thr_sum_ -= entries_.front().throughput;
            entries_.pop_front();
        }
    }

    double collision_rate() const {
        return entries_.empty() ? 0.0 : static_cast<double>(collisions_) / entries_.size();
    }
    double mean_throughput() const {
        return entries_.empty() ? 0.0 : thr_sum_ / entries_.size();
    }

private:
    struct Entry {
        bool collided;
        double throughput;
    };
    int capacity_;
    std::deque<Entry> entries_;
    int collisions_ = 0;
    double thr_sum_ = 0.0;
};

}  // namespace

double epsilon_at(long long step, const RunConfig& cfg) {
    const double horizon = cfg.eps_decay_frac * static_cast<double>(cfg.total_steps);
    if (horizon <= 0.0) return cfg.eps_final;
    const double frac = std::min(1.0, static_cast<double>(step) / horizon);
    return cfg.eps_start + (cfg.eps_final - cfg.eps_start) * frac;
}

double beta_at(long long step, const RunConfig& cfg) {
    if (cfg.total_steps <= 0) return cfg.per_beta_end;
    const double frac = std::min(1.0, static_cast<double>(step) / static_cast<double>(cfg.total_steps));
    return cfg.per_beta_start + (cfg.per_beta_end - cfg.per_beta_start) * frac;
}

CtdeAgents train(const RunConfig& cfg, uint64_t seed, const std::string& out_dir,
                 std::vector<EpisodeMetrics>* metrics_out) {
    cfg.validate();
    Rng rng(seed);
    CtdeAgents agents = make_agents(cfg, rng);
    PriorityBuffer buffer(cfg.buffer_capacity, cfg.per_alpha, cfg.per_beta_start, cfg.per_eps);
    RewardWeights weights{cfg.w_thr, cfg.w_coop, cfg.w_col, cfg.w_fly};
    const IndividualCoeffs coeffs{cfg.alpha_thr, cfg.alpha_assign, cfg.alpha_col};

    const int n = cfg.n_uavs;
    const int obs_dim = cfg.obs_dim();
    std::vector<Action> actions(n);
    std::vector<int> action_indices(n);
    std::vector<double> obs_raw(static_cast<size_t>(n) * obs_dim);
    std::vector<double> obs_one(obs_dim);

    StepWindow window(cfg.collision_window);
    World world = make_world(cfg, rng);
    long long episode = 0;
    int episode_step = 0;
    double ep_global = 0.0, ep_thr_norm = 0.0, ep_thr_bps = 0.0, ep_col = 0.0;
    double ep_indiv = 0.0, ep_jam = 0.0;
    double eps = cfg.eps_start;

    auto flush_episode = [&](int steps_in_episode) {
        if (steps_in_episode == 0 || !metrics_out) return;
        EpisodeMetrics row;
        row.episode = episode;
        const double s = steps_in_episode;
        row.mean_global_reward = ep_global / s;
        row.throughput_norm = ep_thr_norm / s;
        row.throughput_bps = ep_thr_bps / s;
        row.collision_penalty = ep_col;
        row.mean_jammer_distance = ep_jam / s;
        row.mean_individual_reward = ep_indiv / (s * n);
        row.epsilon = eps;
        row.weights = weights;
        metrics_out->push_back(row);
    };

    for (long long step = 0; step < cfg.total_steps; ++step) {
        eps = epsilon_at(step, cfg);

        Transition t;
        t.state = global_state(world, cfg);
        agents.state_norm.observe(t.state);
        t.obs.resize(obs_raw.size());
        for (int i = 0; i < n; ++i) {
            const std::vector<double> o = observe(world, i, cfg);
            agents.obs_norm.observe(o);
            std::copy(o.begin(), o.end(), t.obs.begin() + static_cast<size_t>(i) * obs_dim);
        }
        for (int i = 0; i < n; ++i) {
            const ActionMask mask = safety_mask(world, i, cfg);
            agents.obs_norm.apply_to(
                {t.obs.data() + static_cast<size_t>(i) * obs_dim, static_cast<size_t>(obs_dim)},
                obs_one);
            action_indices[i] = select_action(agents.actors[i], obs_one, eps, mask, rng);
            actions[i] = decode_action(action_indices[i]);
        }

        world = apply_actions(world, actions, cfg);
        world = step_gcvs(world, rng, cfg);
        const std::vector<int> assignment = assign_gcvs(world);
        const std::vector<double> rates = pair_rates(world, cfg, assignment);
        const RewardBreakdown rb = step_rewards(world, actions, assignment, rates, weights, coeffs,
                                                cfg);

        ++episode_step;
        const bool done = episode_step >= cfg.episode_length;
        t.actions = action_indices;
        t.global_reward = rb.global_r;
        t.individual_rewards = rb.individual_r;
        t.state_next = global_state(world, cfg);
        t.obs_next.resize(obs_raw.size());
        for (int i = 0; i < n; ++i) {
            const std::vector<double> o = observe(world, i, cfg);
            std::copy(o.begin(), o.end(), t.obs_next.begin() + static_cast<size_t>(i) * obs_dim);
        }
        t.done = done;
        buffer.push(std::move(t));

        window.push(rb.p_col > 0.0, rb.throughput_norm);
        ep_global += rb.global_r;
        ep_thr_norm += rb.throughput_norm;
        ep_thr_bps += rb.throughput_bps;
        ep_col += rb.p_col;
        for (double r : rb.individual_r) ep_indiv += r;
        ep_jam += mean_jammer_distance(world);

        const bool learning = buffer.size() >= cfg.warmup_steps && buffer.size() >= cfg.batch_size;
        if (learning) {
            buffer.set_beta(beta_at(step, cfg));
            const SampleBatch batch = buffer.sample(cfg.batch_size, rng);
            const UpdateResult result = ctde_update(agents, buffer, batch, cfg);
            bool finite = std::isfinite(result.critic_loss);
            for (double l : result.actor_losses) finite = finite && std::isfinite(l);
            if (!finite)
                throw std::runtime_error("training diverged: non-finite loss at step " +
                                         std::to_string(step));
            buffer.update_priorities(batch.indices, result.priority_td);
        }

        // Targets only track the online nets once learning has started; before
        // that they are identical and must stay bit-identical.
        if (learning && (step + 1) % cfg.target_update_period == 0) polyak_all(agents, cfg.tau);

        if (done) {
            flush_episode(episode_step);
            const double progress = static_cast<double>(step + 1) / cfg.total_steps;
            weights = homeostatic_update(weights, window.collision_rate(),
                                         window.mean_throughput(), progress, cfg);
            ++episode;
            episode_step = 0;
            ep_global = ep_thr_norm = ep_thr_bps = ep_col = ep_indiv = ep_jam = 0.0;
            world = make_world(cfg, rng);
        }

        if (!out_dir.empty() && cfg.checkpoint_period > 0 &&
            (step + 1) % cfg.checkpoint_period == 0)
            save_checkpoint(agents, out_dir + "/checkpoint_" + std::to_string(step + 1) + ".bin");
    }
    flush_episode(episode_step);
    if (metrics_out) apply_smoothing(*metrics_out, cfg.smoothing_window);
    if (!out_dir.empty()) save_checkpoint(agents, out_dir + "/checkpoint_final.bin");
    return agents;
}

}  // namespace relaysim
