#include <cmath>
#include <cstdio>
#include <filesystem>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "relaysim/agents.hpp"
#include "relaysim/checkpoint.hpp"
#include "relaysim/trainer.hpp"

using namespace relaysim;
using namespace relaysim::testutil;

namespace {

RunConfig small_cfg() {
    RunConfig cfg;
    cfg.n_uavs = 2;
    cfg.n_pairs = 2;
    cfg.k_nearest = 2;
    cfg.jammer_positions = {{60.0, 60.0, 15.0}};
    cfg.actor_hidden = {8, 8};
    cfg.critic_hidden = {16, 16};
    cfg.buffer_capacity = 500;
    cfg.batch_size = 16;
    cfg.warmup_steps = 32;
    cfg.total_steps = 240;
    cfg.episode_length = 60;
    cfg.target_update_period = 20;
    cfg.checkpoint_period = 100;
    cfg.smoothing_window = 10;
    cfg.collision_window = 50;
    cfg.validate();
    return cfg;
}

Transition random_transition(const RunConfig& cfg, Rng& rng, bool done) {
    const int n = cfg.n_uavs;
    Transition t;
    t.state.resize(cfg.state_dim());
    t.state_next.resize(cfg.state_dim());
    for (double& x : t.state) x = rng.uniform(-1, 1);
    for (double& x : t.state_next) x = rng.uniform(-1, 1);
    t.obs.resize(static_cast<size_t>(n) * cfg.obs_dim());
    t.obs_next.resize(t.obs.size());
    for (double& x : t.obs) x = rng.uniform(-1, 1);
    for (double& x : t.obs_next) x = rng.uniform(-1, 1);
    t.actions.resize(n);
    for (int& a : t.actions) a = rng.uniform_int(kNumActions);
    t.global_reward = rng.uniform(-2, 2);
    t.individual_rewards.resize(n);
    for (double& r : t.individual_rewards) r = rng.uniform(-2, 2);
    t.done = done;
    return t;
}

void zero_params(CtdeAgents& agents) {
    for (MlpNet& net : agents.actors) std::fill(net.params.begin(), net.params.end(), 0.0);
    for (MlpNet& net : agents.actor_targets) std::fill(net.params.begin(), net.params.end(), 0.0);
    std::fill(agents.critic.params.begin(), agents.critic.params.end(), 0.0);
    std::fill(agents.critic_target.params.begin(), agents.critic_target.params.end(), 0.0);
}

std::string temp_dir(const std::string& name) {
    const std::string path = (std::filesystem::temp_directory_path() / name).string();
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
    return path;
}

}  // namespace

TEST_CASE("make_agents: shapes, target copies, optimizer wiring") {
    RunConfig cfg = small_cfg();
    Rng rng(211);
    const CtdeAgents agents = make_agents(cfg, rng);
    CHECK(agents.n_agents == 2);
    REQUIRE(agents.actors.size() == 2);
    REQUIRE(agents.actor_targets.size() == 2);
    for (int i = 0; i < 2; ++i) {
        CHECK(agents.actors[i].sizes == std::vector<int>{cfg.obs_dim(), 8, 8, kNumActions});
        CHECK(agents.actor_targets[i].params == agents.actors[i].params);
        CHECK(agents.actor_opt[i].lr == cfg.actor_lr);
        CHECK(agents.actor_opt[i].t == 0);
    }
    CHECK(agents.actors[0].params != agents.actors[1].params);
    CHECK(agents.critic.sizes == std::vector<int>{cfg.state_dim(), 16, 16, 1});
    CHECK(agents.critic_target.params == agents.critic.params);
    CHECK(agents.critic_opt.lr == cfg.critic_lr);
    CHECK(agents.obs_norm.dim() == cfg.obs_dim());
    CHECK(agents.state_norm.dim() == cfg.state_dim());
    CHECK(agents.obs_norm.count() == 0);

    RunConfig deflt;
    Rng rng2(212);
    const CtdeAgents big = make_agents(deflt, rng2);
    CHECK(big.actors[0].sizes == std::vector<int>{20, 128, 128, 21});
    CHECK(big.critic.sizes == std::vector<int>{45, 256, 256, 1});
}

TEST_CASE("select_action: greedy path") {
    Rng rng(223);
    const MlpNet actor = MlpNet::make({4, 6, kNumActions}, rng);
    const std::vector<double> obs = {0.3, -0.7, 1.1, 0.0};

    ActionMask only7{};
    only7[7] = true;
    Rng r1(99), r2(99);
    CHECK(select_action(actor, obs, 0.0, only7, r1) == 7);
    CHECK(r1.raw() == r2.raw());  // greedy consumed no randomness

    MlpNet flat = actor;
    std::fill(flat.params.begin(), flat.params.end(), 0.0);
    ActionMask few{};
    few[3] = few[9] = few[14] = true;
    CHECK(select_action(flat, obs, 0.0, few, rng) == 3);  // ties resolve low

    ActionMask none{};
    CHECK_THROWS_AS(select_action(actor, obs, 0.0, none, rng), std::logic_error);
}

TEST_CASE("select_action: exploration is uniform over the allowed set") {
    Rng rng(227);
    const MlpNet actor = MlpNet::make({3, kNumActions}, rng);
    const std::vector<double> obs = {0.1, 0.2, 0.3};
    ActionMask mask{};
    const int allowed[5] = {0, 4, 8, 12, 16};
    for (int a : allowed) mask[a] = true;

    int counts[kNumActions] = {};
    const int n = 100000;
    for (int k = 0; k < n; ++k) ++counts[select_action(actor, obs, 1.0, mask, rng)];
    for (int a = 0; a < kNumActions; ++a) {
        if (mask[a])
            CHECK(std::abs(counts[a] / static_cast<double>(n) - 0.2) < 0.02);
        else
            CHECK(counts[a] == 0);
    }
}

TEST_CASE("select_action: never returns a masked action") {
    Rng rng(229);
    const MlpNet actor = MlpNet::make({5, 8, kNumActions}, rng);
    for (int trial = 0; trial < 300; ++trial) {
        ActionMask mask{};
        int n_allowed = 0;
        for (int a = 0; a < kNumActions; ++a) {
            mask[a] = rng.uniform() < 0.4;
            n_allowed += mask[a] ? 1 : 0;
        }
        if (n_allowed == 0) {
            mask[rng.uniform_int(kNumActions)] = true;
        }
        std::vector<double> obs(5);
        for (double& x : obs) x = rng.uniform(-2, 2);
        const double eps = (trial % 3 == 0) ? 0.0 : (trial % 3 == 1 ? 0.5 : 1.0);
        const int a = select_action(actor, obs, eps, mask, rng);
        CHECK(mask[a]);
    }
}

TEST_CASE("critic_target_value and advantage: constant-net closed forms") {
    RunConfig cfg = small_cfg();
    Rng rng(233);
    CtdeAgents agents = make_agents(cfg, rng);
    zero_params(agents);
    const int last = agents.critic.num_layers() - 1;
    agents.critic.params[agents.critic.bias_offset(last)] = 0.375;         // V_online == c_o
    agents.critic_target.params[agents.critic_target.bias_offset(last)] = -1.5;  // V_target == c_t

    std::vector<double> s(cfg.state_dim()), sn(cfg.state_dim());
    for (double& x : s) x = rng.uniform(-1, 1);
    for (double& x : sn) x = rng.uniform(-1, 1);

    CHECK(critic_value(agents.critic, s) == 0.375);
    CHECK(critic_value(agents.critic_target, sn) == -1.5);

    CHECK(critic_target_value(2.25, sn, true, agents, 0.95) == 2.25);
    CHECK(critic_target_value(2.25, sn, false, agents, 0.0) == 2.25);
    CHECK(critic_target_value(2.25, sn, false, agents, 0.95) == 2.25 + 0.95 * -1.5);

    CHECK(advantage(2.25, s, sn, true, agents, 0.95) == 2.25 - 0.375);
    CHECK(advantage(2.25, s, sn, false, agents, 0.95) == (2.25 + 0.95 * -1.5) - 0.375);
}

TEST_CASE("actor_target_value: terminal and zero-coefficient projections") {
    Rng rng(239);
    const MlpNet online = MlpNet::make({3, 5, 4}, rng);
    const MlpNet target = MlpNet::make({3, 5, 4}, rng);
    const std::vector<double> obs = {0.2, -0.4, 0.9};

    CHECK(actor_target_value(1.25, 0.5, obs, true, online, target, 0.95, 0.5) ==
          1.25 + 0.5 * 0.5);
    CHECK(actor_target_value(1.25, 0.5, obs, true, online, target, 0.95, 0.0) == 1.25);

    // gamma = 0 keeps only the reward-plus-advantage head even off-terminal.
    CHECK(actor_target_value(1.25, 0.5, obs, false, online, target, 0.0, 0.5) ==
          1.25 + 0.5 * 0.5 + 0.0 * mlp_forward(target, obs)[0]);
}

TEST_CASE("actor_target_value: exhaustive replication over random instances") {
    Rng rng(241);
    for (int trial = 0; trial < 200; ++trial) {
        const std::vector<int> shape =
            (trial % 2 == 0) ? std::vector<int>{3, 4} : std::vector<int>{3, 6, 4};
        const MlpNet online = MlpNet::make(shape, rng);
        const MlpNet target = MlpNet::make(shape, rng);
        std::vector<double> obs(3);
        for (double& x : obs) x = rng.uniform(-2, 2);
        const double r = rng.uniform(-2, 2);
        const double adv = rng.uniform(-2, 2);
        const bool done = rng.uniform() < 0.3;
        const double gamma = rng.uniform(0.0, 0.99);
        const double lambda = rng.uniform(0.0, 1.0);

        double want = r + lambda * adv;
        if (!done) {
            const std::vector<double> q_on = mlp_forward(online, obs);
            int best = 0;
            for (int a = 1; a < static_cast<int>(q_on.size()); ++a)
                if (q_on[a] > q_on[best]) best = a;
            const std::vector<double> q_tg = mlp_forward(target, obs);
            want += gamma * q_tg[best];
        }
        CHECK(actor_target_value(r, adv, obs, done, online, target, gamma, lambda) == want);
    }
}

TEST_CASE("actor_target_value: argmax comes from the online net only") {
    Rng rng(251);
    MlpNet online = MlpNet::make({3, 4}, rng);
    std::fill(online.params.begin(), online.params.end(), 0.0);
    online.params[online.bias_offset(0) + 2] = 5.0;  // argmax is action 2 for any input

    for (int trial = 0; trial < 50; ++trial) {
        const MlpNet target = MlpNet::make({3, 4}, rng);
        std::vector<double> obs(3);
        for (double& x : obs) x = rng.uniform(-2, 2);
        const double r = rng.uniform(-1, 1), adv = rng.uniform(-1, 1);
        const double y = actor_target_value(r, adv, obs, false, online, target, 0.9, 0.5);
        const std::vector<double> q_tg = mlp_forward(target, obs);
        double want = r + 0.5 * adv;
        want += 0.9 * q_tg[2];
        CHECK(y == want);
    }
}

TEST_CASE("ctde_update: zero-weight batch changes nothing but reports residuals") {
    RunConfig cfg = small_cfg();
    Rng rng(257);
    CtdeAgents agents = make_agents(cfg, rng);
    PriorityBuffer buffer(16, cfg.per_alpha, cfg.per_beta_start, cfg.per_eps);
    for (int k = 0; k < 6; ++k) buffer.push(random_transition(cfg, rng, k % 3 == 0));

    SampleBatch batch;
    batch.indices = {0, 2, 4, 5};
    batch.weights.assign(4, 0.0);

    const CtdeAgents before = agents;
    const UpdateResult res = ctde_update(agents, buffer, batch, cfg);

    CHECK(res.critic_loss == 0.0);
    for (double l : res.actor_losses) CHECK(l == 0.0);
    CHECK(agents.critic.params == before.critic.params);
    for (int i = 0; i < 2; ++i) CHECK(agents.actors[i].params == before.actors[i].params);

    REQUIRE(res.priority_td.size() == 4);
    for (int j = 0; j < 4; ++j) {
        const Transition& t = buffer.at(batch.indices[j]);
        const double adv_j =
            advantage(t.global_reward, t.state, t.state_next, t.done, before, cfg.gamma);
        double want = std::abs(adv_j);
        for (int i = 0; i < 2; ++i) {
            std::span<const double> o{t.obs.data() + static_cast<size_t>(i) * cfg.obs_dim(),
                                      static_cast<size_t>(cfg.obs_dim())};
            std::span<const double> on{t.obs_next.data() + static_cast<size_t>(i) * cfg.obs_dim(),
                                       static_cast<size_t>(cfg.obs_dim())};
            const double y_q =
                actor_target_value(t.individual_rewards[i], adv_j, on, t.done, before.actors[i],
                                   before.actor_targets[i], cfg.gamma, cfg.lambda_adv);
            const double q = mlp_forward(before.actors[i], o)[t.actions[i]];
            want += std::abs(y_q - q) / 2.0;
        }
        CHECK(rel_err(res.priority_td[j], want) < 1e-9);
    }
}

TEST_CASE("ctde_update: losses match single-sample recomputation") {
    RunConfig cfg = small_cfg();
    Rng rng(263);
    CtdeAgents agents = make_agents(cfg, rng);
    PriorityBuffer buffer(16, cfg.per_alpha, cfg.per_beta_start, cfg.per_eps);
    for (int k = 0; k < 8; ++k) buffer.push(random_transition(cfg, rng, k == 2 || k == 5));

    SampleBatch batch;
    batch.indices = {1, 2, 5, 7};
    batch.weights = {0.8, 1.0, 0.35, 0.6};
    const int b = 4;

    const CtdeAgents pre = agents;
    const UpdateResult res = ctde_update(agents, buffer, batch, cfg);

    double critic_loss = 0.0;
    std::vector<double> actor_loss(2, 0.0);
    for (int j = 0; j < b; ++j) {
        const Transition& t = buffer.at(batch.indices[j]);
        const double y_v = critic_target_value(t.global_reward, t.state_next, t.done, pre, cfg.gamma);
        const double resid_v = y_v - critic_value(pre.critic, t.state);
        critic_loss += batch.weights[j] * huber(resid_v, cfg.huber_delta).first;
        const double adv_j = resid_v;
        for (int i = 0; i < 2; ++i) {
            std::span<const double> o{t.obs.data() + static_cast<size_t>(i) * cfg.obs_dim(),
                                      static_cast<size_t>(cfg.obs_dim())};
            std::span<const double> on{t.obs_next.data() + static_cast<size_t>(i) * cfg.obs_dim(),
                                       static_cast<size_t>(cfg.obs_dim())};
            const double y_q =
                actor_target_value(t.individual_rewards[i], adv_j, on, t.done, pre.actors[i],
                                   pre.actor_targets[i], cfg.gamma, cfg.lambda_adv);
            const double resid = y_q - mlp_forward(pre.actors[i], o)[t.actions[i]];
            actor_loss[i] += batch.weights[j] * huber(resid, cfg.huber_delta).first;
        }
    }
    CHECK(rel_err(res.critic_loss, critic_loss / b) < 1e-9);
    for (int i = 0; i < 2; ++i) CHECK(rel_err(res.actor_losses[i], actor_loss[i] / b) < 1e-9);

    // The update must actually move the online nets.
    CHECK(agents.critic.params != pre.critic.params);
    CHECK(agents.actors[0].params != pre.actors[0].params);
    // Targets move only through polyak_all.
    CHECK(agents.critic_target.params == pre.critic_target.params);
    CHECK(agents.actor_targets[1].params == pre.actor_targets[1].params);
}

TEST_CASE("ctde_update: one agent's action touches only its own actor") {
    RunConfig cfg = small_cfg();
    Rng rng(269);
    CtdeAgents base = make_agents(cfg, rng);

    std::vector<Transition> ts;
    for (int k = 0; k < 5; ++k) ts.push_back(random_transition(cfg, rng, k == 1));

    PriorityBuffer buf_a(16, cfg.per_alpha, cfg.per_beta_start, cfg.per_eps);
    PriorityBuffer buf_b(16, cfg.per_alpha, cfg.per_beta_start, cfg.per_eps);
    for (const Transition& t : ts) buf_a.push(t);
    ts[3].actions[1] = (ts[3].actions[1] + 7) % kNumActions;
    for (const Transition& t : ts) buf_b.push(t);

    SampleBatch batch;
    batch.indices = {0, 1, 3, 4};
    batch.weights = {1.0, 0.5, 0.9, 0.7};

    CtdeAgents agents_a = base;
    CtdeAgents agents_b = base;
    ctde_update(agents_a, buf_a, batch, cfg);
    ctde_update(agents_b, buf_b, batch, cfg);

    CHECK(agents_a.critic.params == agents_b.critic.params);
    CHECK(agents_a.actors[0].params == agents_b.actors[0].params);
    CHECK(agents_a.actors[1].params != agents_b.actors[1].params);
}

TEST_CASE("ctde_update: the zero state is a fixed point") {
    RunConfig cfg = small_cfg();
    Rng rng(271);
    CtdeAgents agents = make_agents(cfg, rng);
    zero_params(agents);

    PriorityBuffer buffer(8, cfg.per_alpha, cfg.per_beta_start, cfg.per_eps);
    for (int k = 0; k < 4; ++k) {
        Transition t = random_transition(cfg, rng, true);
        t.global_reward = 0.0;
        std::fill(t.individual_rewards.begin(), t.individual_rewards.end(), 0.0);
        buffer.push(t);
    }
    SampleBatch batch;
    batch.indices = {0, 1, 2, 3};
    batch.weights.assign(4, 1.0);

    const UpdateResult res = ctde_update(agents, buffer, batch, cfg);
    CHECK(res.critic_loss == 0.0);
    for (double l : res.actor_losses) CHECK(l == 0.0);
    for (double p : res.priority_td) CHECK(p == 0.0);
    for (double p : agents.critic.params) CHECK(p == 0.0);
    for (double p : agents.actors[0].params) CHECK(p == 0.0);
    for (double p : agents.actors[1].params) CHECK(p == 0.0);
}

TEST_CASE("ctde_update: priority signal is homogeneous in the rewards") {
    RunConfig cfg = small_cfg();
    Rng rng(277);
    CtdeAgents agents = make_agents(cfg, rng);
    zero_params(agents);

    std::vector<Transition> ts;
    for (int k = 0; k < 4; ++k) ts.push_back(random_transition(cfg, rng, true));

    PriorityBuffer buf1(8, cfg.per_alpha, cfg.per_beta_start, cfg.per_eps);
    PriorityBuffer buf2(8, cfg.per_alpha, cfg.per_beta_start, cfg.per_eps);
    for (const Transition& t : ts) buf1.push(t);
    for (Transition t : ts) {
        t.global_reward *= 2.0;
        for (double& r : t.individual_rewards) r *= 2.0;
        buf2.push(std::move(t));
    }

    SampleBatch batch;
    batch.indices = {0, 1, 2, 3};
    batch.weights.assign(4, 0.0);

    CtdeAgents a1 = agents;
    CtdeAgents a2 = agents;
    const UpdateResult r1 = ctde_update(a1, buf1, batch, cfg);
    const UpdateResult r2 = ctde_update(a2, buf2, batch, cfg);
    for (int j = 0; j < 4; ++j) CHECK(r2.priority_td[j] == 2.0 * r1.priority_td[j]);
}

TEST_CASE("polyak_all: copy, identity, contraction") {
    RunConfig cfg = small_cfg();
    Rng rng(281);
    CtdeAgents agents = make_agents(cfg, rng);

    // Make online and target genuinely different first.
    PriorityBuffer buffer(8, cfg.per_alpha, cfg.per_beta_start, cfg.per_eps);
    for (int k = 0; k < 4; ++k) buffer.push(random_transition(cfg, rng, false));
    SampleBatch batch;
    batch.indices = {0, 1, 2, 3};
    batch.weights.assign(4, 1.0);
    ctde_update(agents, buffer, batch, cfg);
    REQUIRE(agents.critic.params != agents.critic_target.params);

    CtdeAgents frozen = agents;
    polyak_all(frozen, 0.0);
    CHECK(frozen.critic_target.params == agents.critic_target.params);
    CHECK(frozen.actor_targets[0].params == agents.actor_targets[0].params);

    CtdeAgents interp = agents;
    polyak_all(interp, 0.3);
    for (size_t p = 0; p < interp.critic.params.size(); ++p) {
        const double before = std::abs(agents.critic_target.params[p] - agents.critic.params[p]);
        const double after = std::abs(interp.critic_target.params[p] - agents.critic.params[p]);
        CHECK(after <= before + 1e-15);
    }

    CtdeAgents copied = agents;
    polyak_all(copied, 1.0);
    CHECK(copied.critic_target.params == agents.critic.params);
    CHECK(copied.actor_targets[0].params == agents.actors[0].params);
    CHECK(copied.actor_targets[1].params == agents.actors[1].params);
}

TEST_CASE("epsilon_at and beta_at: linear schedules with clamped tails") {
    RunConfig cfg;
    cfg.total_steps = 1000;
    CHECK(epsilon_at(0, cfg) == 1.0);
    CHECK(epsilon_at(400, cfg) == doctest::Approx(0.525).epsilon(1e-12));
    CHECK(epsilon_at(800, cfg) == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(epsilon_at(999, cfg) == doctest::Approx(0.05).epsilon(1e-12));

    CHECK(beta_at(0, cfg) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(beta_at(500, cfg) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(beta_at(1000, cfg) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(beta_at(5000, cfg) == doctest::Approx(1.0).epsilon(1e-12));

    RunConfig flat;
    flat.total_steps = 100;
    flat.eps_decay_frac = 0.0;
    CHECK(epsilon_at(0, flat) == flat.eps_final);
}

TEST_CASE("train: episode accounting, schedules in rows, smoothing") {
    RunConfig cfg = small_cfg();
    std::vector<EpisodeMetrics> rows;
    train(cfg, 5, "", &rows);

    REQUIRE(rows.size() == 4);
    for (int e = 0; e < 4; ++e) {
        CHECK(rows[e].episode == e);
        CHECK(rows[e].epsilon == epsilon_at(e * 60 + 59, cfg));
        CHECK(rows[e].weights.thr == 1.0);  // homeostasis has not fired inside any row yet
        CHECK(rows[e].weights.col == 2.0);
        CHECK(std::isfinite(rows[e].mean_global_reward));
        CHECK(rows[e].collision_penalty >= 0.0);
        CHECK(rows[e].throughput_norm > 0.0);
        CHECK(rows[e].mean_jammer_distance > 0.0);
    }
    double running = 0.0;
    for (size_t i = 0; i < rows.size(); ++i) {
        running += rows[i].mean_global_reward;
        CHECK(rows[i].smoothed_reward == running / (i + 1));
    }
}

TEST_CASE("train: deterministic from the seed") {
    RunConfig cfg = small_cfg();
    std::vector<EpisodeMetrics> rows1, rows2;
    const CtdeAgents a1 = train(cfg, 12, "", &rows1);
    const CtdeAgents a2 = train(cfg, 12, "", &rows2);

    REQUIRE(rows1.size() == rows2.size());
    for (size_t i = 0; i < rows1.size(); ++i) {
        CHECK(rows1[i].mean_global_reward == rows2[i].mean_global_reward);
        CHECK(rows1[i].throughput_bps == rows2[i].throughput_bps);
        CHECK(rows1[i].collision_penalty == rows2[i].collision_penalty);
        CHECK(rows1[i].mean_individual_reward == rows2[i].mean_individual_reward);
    }
    CHECK(a1.critic.params == a2.critic.params);
    for (int i = 0; i < 2; ++i) CHECK(a1.actors[i].params == a2.actors[i].params);

    std::vector<EpisodeMetrics> rows3;
    const CtdeAgents a3 = train(cfg, 13, "", &rows3);
    CHECK(a3.critic.params != a1.critic.params);
}

TEST_CASE("train: checkpoint cadence and final snapshot") {
    RunConfig cfg = small_cfg();
    const std::string dir = temp_dir("relaysim_train_ckpt");
    std::vector<EpisodeMetrics> rows;
    const CtdeAgents trained = train(cfg, 3, dir, &rows);

    CHECK(std::filesystem::exists(dir + "/checkpoint_100.bin"));
    CHECK(std::filesystem::exists(dir + "/checkpoint_200.bin"));
    CHECK(std::filesystem::exists(dir + "/checkpoint_final.bin"));
    CHECK_FALSE(std::filesystem::exists(dir + "/checkpoint_300.bin"));

    const CtdeAgents loaded = load_checkpoint(dir + "/checkpoint_final.bin", cfg);
    CHECK(loaded.critic.params == trained.critic.params);
    CHECK(loaded.critic_target.params == trained.critic_target.params);
    for (int i = 0; i < 2; ++i) {
        CHECK(loaded.actors[i].params == trained.actors[i].params);
        CHECK(loaded.actor_targets[i].params == trained.actor_targets[i].params);
    }
    CHECK(loaded.obs_norm.count() == trained.obs_norm.count());

    const CtdeAgents mid = load_checkpoint(dir + "/checkpoint_100.bin", cfg);
    CHECK(mid.critic.params != trained.critic.params);
    std::filesystem::remove_all(dir);
}

TEST_CASE("train: no updates before warmup") {
    RunConfig cfg = small_cfg();
    cfg.warmup_steps = 100000;  // never reached in 240 steps
    std::vector<EpisodeMetrics> rows;
    const CtdeAgents after = train(cfg, 21, "", &rows);
    Rng fresh_rng(21);
    const CtdeAgents fresh = make_agents(cfg, fresh_rng);
    CHECK(after.critic.params == fresh.critic.params);
    CHECK(after.critic_target.params == fresh.critic_target.params);
    for (int i = 0; i < 2; ++i) {
        CHECK(after.actors[i].params == fresh.actors[i].params);
        CHECK(after.actor_targets[i].params == fresh.actor_targets[i].params);
    }
    CHECK(after.state_norm.count() == cfg.total_steps);
}

TEST_CASE("train: partial trailing episode still flushes") {
    RunConfig cfg = small_cfg();
    cfg.total_steps = 250;
    std::vector<EpisodeMetrics> rows;
    train(cfg, 7, "", &rows);
    REQUIRE(rows.size() == 5);
    CHECK(rows[4].episode == 4);
    CHECK(std::isfinite(rows[4].mean_global_reward));
    CHECK(rows[4].throughput_norm > 0.0);
}
