#include "relaysim/baselines.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "relaysim/checkpoint.hpp"
#include "relaysim/dynamics.hpp"
#include "relaysim/observe.hpp"

namespace relaysim {

namespace {

constexpr int kMaxPower = kNumPowers - 1;

// Unit direction of each movement primitive; Stay is the zero vector.
Vec3 move_direction(Move m) {
    switch (m) {
        case Move::Stay: return {0.0, 0.0, 0.0};
        case Move::North: return {0.0, 1.0, 0.0};
        case Move::South: return {0.0, -1.0, 0.0};
        case Move::East: return {1.0, 0.0, 0.0};
        case Move::West: return {-1.0, 0.0, 0.0};
        case Move::Up: return {0.0, 0.0, 1.0};
        case Move::Down: return {0.0, 0.0, -1.0};
    }
    return {0.0, 0.0, 0.0};
}

// Allowed primitive whose direction best aligns with `desired`; ties and the
// all-nonpositive case resolve to the lowest index (Stay scores zero).
Move best_aligned_move(const Vec3& desired, const ActionMask& mask) {
    double best = -std::numeric_limits<double>::infinity();
    int best_move = -1;
    for (int m = 0; m < kNumMoves; ++m) {
        if (!mask[encode_action({static_cast<Move>(m), 0})]) continue;
        const Vec3 dir = move_direction(static_cast<Move>(m));
        const double score = dir.x * desired.x + dir.y * desired.y + dir.z * desired.z;
        if (score > best) {
            best = score;
            best_move = m;
        }
    }
    if (best_move < 0) throw std::logic_error("baseline: empty action mask");
    return static_cast<Move>(best_move);
}

Vec3 toward_closest_midpoint(const World& world, int agent, double cruise_altitude) {
    const UavState& self = world.uavs[agent];
    double best_d = std::numeric_limits<double>::infinity();
    Vec3 target = self.pos;
    for (const GcvPair& pair : world.gcvs) {
        const Vec3 mid = midpoint(pair.src_pos, pair.dst_pos);
        const double d = distance(self.pos, mid);
        if (d < best_d) {
            best_d = d;
            target = Vec3{mid.x, mid.y, cruise_altitude};
        }
    }
    const Vec3 diff = target - self.pos;
    return diff.normalized();
}

}  // namespace

Action RandomPolicy::act(const World&, int, std::span<const double>, const ActionMask& mask,
                         Rng& rng) {
    int n_allowed = 0;
    for (bool b : mask) n_allowed += b ? 1 : 0;
    if (n_allowed == 0) throw std::logic_error("baseline: empty action mask");
    int pick = rng.uniform_int(n_allowed);
    for (int a = 0; a < kNumActions; ++a) {
        if (!mask[a]) continue;
        if (pick == 0) return decode_action(a);
        --pick;
    }
    throw std::logic_error("baseline: mask scan failed");
}

Action SafeGreedyPolicy::act(const World& world, int agent, std::span<const double>,
                             const ActionMask& mask, Rng&) {
    Vec3 desired = toward_closest_midpoint(world, agent, cfg_.cruise_altitude);
    const Vec3 self = world.uavs[agent].pos;
    for (int j = 0; j < static_cast<int>(world.uavs.size()); ++j) {
        if (j == agent) continue;
        const Vec3 away = self - world.uavs[j].pos;
        const double d = away.norm();
        if (d >= cfg_.repulse_radius || d <= 1e-12) continue;
        const double gain = cfg_.repulse_gain * (cfg_.repulse_radius / d) * (cfg_.repulse_radius / d);
        desired = desired + away.normalized() * gain;
    }
    return Action{best_aligned_move(desired, mask), kMaxPower};
}

Action SpacingCoopPolicy::act(const World& world, int agent, std::span<const double>,
                              const ActionMask& mask, Rng&) {
    Vec3 desired = toward_closest_midpoint(world, agent, cfg_.cruise_altitude);
    const Vec3 self = world.uavs[agent].pos;
    for (int j = 0; j < static_cast<int>(world.uavs.size()); ++j) {
        if (j == agent) continue;
        const Vec3 toward = world.uavs[j].pos - self;
        const double d = toward.norm();
        if (d <= 1e-12) continue;
        const double gain = cfg_.spacing_gain * std::tanh((d - cfg_.d_ideal) / cfg_.spacing_scale);
        desired = desired + toward.normalized() * gain;
    }
    return Action{best_aligned_move(desired, mask), kMaxPower};
}

Action PowerConstrainedPolicy::act(const World& world, int agent, std::span<const double> obs,
                                   const ActionMask& mask, Rng& rng) {
    Action a = base_->act(world, agent, obs, mask, rng);
    a.power_index = 0;
    return a;
}

Action CtdePolicy::act(const World&, int agent, std::span<const double> obs,
                       const ActionMask& mask, Rng& rng) {
    if (agent < 0 || agent >= agents_.n_agents)
        throw std::out_of_range("ctde policy: agent index");
    const std::vector<double> normed = agents_.obs_norm.apply(obs);
    const int idx = select_action(agents_.actors[agent], normed, 0.0, mask, rng);
    return decode_action(idx);
}

std::unique_ptr<Policy> make_policy(const std::string& name, const RunConfig& cfg,
                                    const std::string& checkpoint_path) {
    if (name == "random") return std::make_unique<RandomPolicy>();
    if (name == "safe_greedy") return std::make_unique<SafeGreedyPolicy>(cfg);
    if (name == "spacing_coop") return std::make_unique<SpacingCoopPolicy>(cfg);
    if (name == "safe_greedy_p1")
        return std::make_unique<PowerConstrainedPolicy>(std::make_unique<SafeGreedyPolicy>(cfg));
    if (name == "spacing_coop_p1")
        return std::make_unique<PowerConstrainedPolicy>(std::make_unique<SpacingCoopPolicy>(cfg));
    if (name == "ctde") {
        if (checkpoint_path.empty())
            throw std::invalid_argument("ctde policy requires a checkpoint path");
        return std::make_unique<CtdePolicy>(load_checkpoint(checkpoint_path, cfg));
    }
    throw std::invalid_argument("unknown policy name: " + name);
}

}  // namespace relaysim
