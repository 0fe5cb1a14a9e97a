#include "relaysim/agents.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace relaysim {

CtdeAgents make_agents(const RunConfig& cfg, Rng& rng) {
    CtdeAgents agents;
    agents.n_agents = cfg.n_uavs;
    std::vector<int> actor_sizes = {cfg.obs_dim()};
    actor_sizes.insert(actor_sizes.end(), cfg.actor_hidden.begin(), cfg.actor_hidden.end());
    actor_sizes.push_back(kNumActions);
    std::vector<int> critic_sizes = {cfg.state_dim()};
    critic_sizes.insert(critic_sizes.end(), cfg.critic_hidden.begin(), cfg.critic_hidden.end());
    critic_sizes.push_back(1);
    agents.actors.reserve(cfg.n_uavs);
    for (int i = 0; i < cfg.n_uavs; ++i) agents.actors.push_back(MlpNet::make(actor_sizes, rng));
    agents.actor_targets = agents.actors;
    agents.critic = MlpNet::make(critic_sizes, rng);
    agents.critic_target = agents.critic;
    for (int i = 0; i < cfg.n_uavs; ++i)
        agents.actor_opt.push_back(AdamState::make(agents.actors[i].param_count(), cfg.actor_lr,
                                                   cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps));
    agents.critic_opt = AdamState::make(agents.critic.param_count(), cfg.critic_lr, cfg.adam_beta1,
                                        cfg.adam_beta2, cfg.adam_eps);
    agents.obs_norm = Normalizer(cfg.obs_dim());
    agents.state_norm = Normalizer(cfg.state_dim());
    return agents;
}

int select_action(const MlpNet& actor, std::span<const double> obs, double eps,
                  const ActionMask& mask, Rng& rng) {
    int n_allowed = 0;
    for (bool b : mask) n_allowed += b ? 1 : 0;
    if (n_allowed == 0) throw std::logic_error("select_action: empty action mask");
    if (eps > 0.0 && rng.uniform() < eps) {
        int pick = rng.uniform_int(n_allowed);
        for (int a = 0; a < kNumActions; ++a) {
            if (!mask[a]) continue;
            if (pick == 0) return a;
            --pick;
        }
    }
    const std::vector<double> q = mlp_forward(actor, obs);
    double best = -std::numeric_limits<double>::infinity();
    int best_idx = -1;
    for (int a = 0; a < kNumActions; ++a) {
        if (!mask[a]) continue;
        if (q[a] > best) {
            best = q[a];
            best_idx = a;
        }
    }
    return best_idx;
}

double critic_value(const MlpNet& critic, std::span<const double> state) {
    return mlp_forward(critic, state)[0];
}

double critic_target_value(double global_r, std::span<const double> state_next, bool done,
                           const CtdeAgents& agents, double gamma) {
    if (done) return global_r;
    return global_r + gamma * critic_value(agents.critic_target, state_next);
}

double advantage(double global_r, std::span<const double> state,
                 std::span<const double> state_next, bool done, const CtdeAgents& agents,
                 double gamma) {
    return critic_target_value(global_r, state_next, done, agents, gamma) -
           critic_value(agents.critic, state);
}

double actor_target_value(double individual_r, double adv, std::span<const double> obs_next,
                          bool done, const MlpNet& actor_online, const MlpNet& actor_target,
                          double gamma, double lambda) {
    double y = individual_r + lambda * adv;
    if (!done) {
        const std::vector<double> q_online = mlp_forward(actor_online, obs_next);
        int best = 0;
        for (int a = 1; a < static_cast<int>(q_online.size()); ++a)
            if (q_online[a] > q_online[best]) best = a;
        const std::vector<double> q_target = mlp_forward(actor_target, obs_next);
        y += gamma * q_target[best];
    }
    return y;
}

namespace {

// Batch-sized buffers reused across update calls; sized on first use and
// stable thereafter. Thread-local so independent training bundles can run in
// parallel threads.
struct UpdateScratch {
    Matrix s, s_next, o, o_next, d_v, d_q;
    ForwardCache critic_cache, target_cache, tmp_cache, actor_cache;
    std::vector<double> grad, y_v, resid_v, y_q;
    std::vector<int> a_star;
};

void ensure_shape(Matrix& m, int rows, int cols) {
    if (m.rows != rows || m.cols != cols) m = Matrix(rows, cols);
}

}  // namespace

UpdateResult ctde_update(CtdeAgents& agents, const PriorityBuffer& buffer,
                         const SampleBatch& batch, const RunConfig& cfg) {
    const int b = static_cast<int>(batch.indices.size());
    if (b == 0) throw std::invalid_argument("ctde_update: empty batch");
    const int n_agents = agents.n_agents;
    const int obs_dim = cfg.obs_dim();
    const int state_dim = cfg.state_dim();
    const double gamma = cfg.gamma;

    static thread_local UpdateScratch ws;
    Matrix& s = ws.s;
    Matrix& s_next = ws.s_next;
    ensure_shape(s, b, state_dim);
    ensure_shape(s_next, b, state_dim);

    // Stored transitions are raw; normalize with the current running stats.
    for (int j = 0; j < b; ++j) {
        const Transition& t = buffer.at(batch.indices[j]);
        agents.state_norm.apply_to(t.state, {s.row(j), static_cast<size_t>(state_dim)});
        agents.state_norm.apply_to(t.state_next, {s_next.row(j), static_cast<size_t>(state_dim)});
    }

    // Critic targets and advantages from the pre-update critic.
    const Matrix& v_s = mlp_forward_batch(agents.critic, s, ws.critic_cache);
    ws.y_v.resize(b);
    ws.resid_v.resize(b);
    std::vector<double>& y_v = ws.y_v;
    std::vector<double>& resid_v = ws.resid_v;
    {
        const Matrix& v_next = mlp_forward_batch(agents.critic_target, s_next, ws.target_cache);
        for (int j = 0; j < b; ++j) {
            const Transition& t = buffer.at(batch.indices[j]);
            y_v[j] = t.done ? t.global_reward : t.global_reward + gamma * v_next.at(j, 0);
            resid_v[j] = y_v[j] - v_s.at(j, 0);
        }
    }

    UpdateResult out;
    out.priority_td.assign(b, 0.0);

    // Importance-weighted Huber critic update.
    Matrix& d_v = ws.d_v;
    ensure_shape(d_v, b, 1);
    {
        double loss = 0.0;
        for (int j = 0; j < b; ++j) {
            auto [l, dl] = huber(resid_v[j], cfg.huber_delta);
            loss += batch.weights[j] * l;
            d_v.at(j, 0) = -batch.weights[j] * dl / b;
            out.priority_td[j] += std::abs(resid_v[j]);
        }
        out.critic_loss = loss / b;
        ws.grad.assign(agents.critic.param_count(), 0.0);
        mlp_backward_batch(agents.critic, ws.critic_cache, d_v, ws.grad);
        clip_gradient(ws.grad, cfg.grad_clip);
        adam_step(agents.critic.params, ws.grad, agents.critic_opt);
    }

    // The advantage reuses the critic residual computed above.
    const std::vector<double>& adv = resid_v;

    out.actor_losses.assign(n_agents, 0.0);
    Matrix& o = ws.o;
    Matrix& o_next = ws.o_next;
    Matrix& d_q = ws.d_q;
    ensure_shape(o, b, obs_dim);
    ensure_shape(o_next, b, obs_dim);
    ensure_shape(d_q, b, kNumActions);
    for (int i = 0; i < n_agents; ++i) {
        for (int j = 0; j < b; ++j) {
            const Transition& t = buffer.at(batch.indices[j]);
            const size_t off = static_cast<size_t>(i) * obs_dim;
            agents.obs_norm.apply_to({t.obs.data() + off, static_cast<size_t>(obs_dim)},
                                     {o.row(j), static_cast<size_t>(obs_dim)});
            agents.obs_norm.apply_to({t.obs_next.data() + off, static_cast<size_t>(obs_dim)},
                                     {o_next.row(j), static_cast<size_t>(obs_dim)});
        }
        // Double-DQN target: online argmax over the full set, target evaluation.
        ws.y_q.resize(b);
        std::vector<double>& y_q = ws.y_q;
        {
            const Matrix& q_on_next = mlp_forward_batch(agents.actors[i], o_next, ws.tmp_cache);
            ws.a_star.resize(b);
            std::vector<int>& a_star = ws.a_star;
            for (int j = 0; j < b; ++j) {
                const double* row = q_on_next.row(j);
                int best = 0;
                for (int a = 1; a < kNumActions; ++a)
                    if (row[a] > row[best]) best = a;
                a_star[j] = best;
            }
            const Matrix& q_tg_next =
                mlp_forward_batch(agents.actor_targets[i], o_next, ws.tmp_cache);
            for (int j = 0; j < b; ++j) {
                const Transition& t = buffer.at(batch.indices[j]);
                double y = t.individual_rewards[i] + cfg.lambda_adv * adv[j];
                if (!t.done) y += gamma * q_tg_next.at(j, a_star[j]);
                y_q[j] = y;
            }
        }
        const Matrix& q_cur = mlp_forward_batch(agents.actors[i], o, ws.actor_cache);
        d_q.zero();
        double loss = 0.0;
        for (int j = 0; j < b; ++j) {
            const Transition& t = buffer.at(batch.indices[j]);
            const int a_taken = t.actions[i];
            const double resid = y_q[j] - q_cur.at(j, a_taken);
            auto [l, dl] = huber(resid, cfg.huber_delta);
            loss += batch.weights[j] * l;
            d_q.at(j, a_taken) = -batch.weights[j] * dl / b;
            out.priority_td[j] += std::abs(resid) / n_agents;
        }
        out.actor_losses[i] = loss / b;
        ws.grad.assign(agents.actors[i].param_count(), 0.0);
        mlp_backward_batch(agents.actors[i], ws.actor_cache, d_q, ws.grad);
        clip_gradient(ws.grad, cfg.grad_clip);
        adam_step(agents.actors[i].params, ws.grad, agents.actor_opt[i]);
    }
    return out;
}

void polyak_all(CtdeAgents& agents, double tau) {
    for (int i = 0; i < agents.n_agents; ++i)
        polyak_update(agents.actors[i].params, agents.actor_targets[i].params, tau);
    polyak_update(agents.critic.params, agents.critic_target.params, tau);
}

}  // namespace relaysim
