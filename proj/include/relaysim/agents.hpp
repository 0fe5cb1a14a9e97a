#pragma once

#include <span>
#include <vector>

#include "relaysim/action.hpp"
#include "relaysim/config.hpp"
#include "relaysim/mlp.hpp"
#include "relaysim/replay.hpp"
#include "relaysim/rng.hpp"

namespace relaysim {

// Centralized-critic / decentralized-actor bundle. The critic sees the global
// state; each actor sees only its own local observation. Target copies track
// the online networks through soft updates.
struct CtdeAgents {
    int n_agents = 0;
    std::vector<MlpNet> actors;
    std::vector<MlpNet> actor_targets;
    MlpNet critic;
    MlpNet critic_target;
    std::vector<AdamState> actor_opt;
    AdamState critic_opt;
    Normalizer obs_norm;
    Normalizer state_norm;
};

CtdeAgents make_agents(const RunConfig& cfg, Rng& rng);

// Masked epsilon-greedy over the composite action set. Disallowed entries are
// excluded from both the greedy argmax and the uniform draw; greedy ties go to
// the lowest index. obs must already be normalized.
int select_action(const MlpNet& actor, std::span<const double> obs, double eps,
                  const ActionMask& mask, Rng& rng);

double critic_value(const MlpNet& critic, std::span<const double> state);

// TD target for the critic: y_v = R + gamma * V_target(s'), bootstrap zeroed
// on terminal transitions.
double critic_target_value(double global_r, std::span<const double> state_next, bool done,
                           const CtdeAgents& agents, double gamma);

// Global advantage: A = y_v - V_online(s). Online critic for the baseline,
// target critic inside y_v.
double advantage(double global_r, std::span<const double> state,
                 std::span<const double> state_next, bool done, const CtdeAgents& agents,
                 double gamma);

// Double-DQN composite target: a* from the online actor over the full action
// set, evaluated by the target actor; y_q = r_i + lambda*A + gamma*Q'(o', a*).
// Only the bootstrap term is dropped on terminal transitions.
double actor_target_value(double individual_r, double adv, std::span<const double> obs_next,
                          bool done, const MlpNet& actor_online, const MlpNet& actor_target,
                          double gamma, double lambda);

struct UpdateResult {
    double critic_loss = 0.0;
    std::vector<double> actor_losses;
    std::vector<double> priority_td;  // per sampled transition
};

// One full learning step on a sampled batch: importance-weighted Huber critic
// update, then per-agent Double-DQN actor updates using the pre-update critic
// for advantages. Returns pre-step losses and the replay priority signal
// (critic residual magnitude plus mean actor residual magnitude).
UpdateResult ctde_update(CtdeAgents& agents, const PriorityBuffer& buffer,
                         const SampleBatch& batch, const RunConfig& cfg);

// Soft-updates every target network toward its online counterpart.
void polyak_all(CtdeAgents& agents, double tau);

}  // namespace relaysim
