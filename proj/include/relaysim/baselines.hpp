#pragma once

#include <memory>
#include <span>
#include <string>

#include "relaysim/action.hpp"
#include "relaysim/agents.hpp"
#include "relaysim/config.hpp"
#include "relaysim/rng.hpp"
#include "relaysim/world.hpp"

namespace relaysim {

// Common interface for trained actors and rule-based controllers. The raw
// observation vector is provided for learned policies; heuristics read the
// world directly. Returned actions always satisfy the mask.
class Policy {
public:
    virtual ~Policy() = default;
    virtual Action act(const World& world, int agent, std::span<const double> obs,
                       const ActionMask& mask, Rng& rng) = 0;
};

// Uniform over the allowed composite actions.
class RandomPolicy : public Policy {
public:
    Action act(const World& world, int agent, std::span<const double> obs, const ActionMask& mask,
               Rng& rng) override;
};

// Steers toward the closest pair midpoint (taken at cruise altitude) with an
// inverse-square repulsion from UAVs closer than repulse_radius; always
// transmits at maximum power. Deterministic.
class SafeGreedyPolicy : public Policy {
public:
    explicit SafeGreedyPolicy(const RunConfig& cfg) : cfg_(cfg) {}
    Action act(const World& world, int agent, std::span<const double> obs, const ActionMask& mask,
               Rng& rng) override;

private:
    RunConfig cfg_;
};

// Like SafeGreedyPolicy but the pairwise term is a smooth spacing controller:
// tanh((d - d_ideal)/s) scaled toward the neighbor, so it attracts when too
// far and repels when too near.
class SpacingCoopPolicy : public Policy {
public:
    explicit SpacingCoopPolicy(const RunConfig& cfg) : cfg_(cfg) {}
    Action act(const World& world, int agent, std::span<const double> obs, const ActionMask& mask,
               Rng& rng) override;

private:
    RunConfig cfg_;
};

// Delegates move selection to the wrapped policy and pins transmission to the
// lowest power level.
class PowerConstrainedPolicy : public Policy {
public:
    explicit PowerConstrainedPolicy(std::unique_ptr<Policy> base) : base_(std::move(base)) {}
    Action act(const World& world, int agent, std::span<const double> obs, const ActionMask& mask,
               Rng& rng) override;

private:
    std::unique_ptr<Policy> base_;
};

// Greedy execution of trained actors with frozen observation statistics.
class CtdePolicy : public Policy {
public:
    explicit CtdePolicy(CtdeAgents agents) : agents_(std::move(agents)) {}
    Action act(const World& world, int agent, std::span<const double> obs, const ActionMask& mask,
               Rng& rng) override;

private:
    CtdeAgents agents_;
};

// Factory behind the CLI names: random | safe_greedy | spacing_coop |
// safe_greedy_p1 | spacing_coop_p1 | ctde. The ctde policy requires a
// checkpoint path; others ignore it.
std::unique_ptr<Policy> make_policy(const std::string& name, const RunConfig& cfg,
                                    const std::string& checkpoint_path = "");

}  // namespace relaysim
