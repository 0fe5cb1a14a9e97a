#include <cmath>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "relaysim/dynamics.hpp"
#include "relaysim/rewards.hpp"
#include "relaysim/world.hpp"

using namespace relaysim;
using namespace relaysim::testutil;

TEST_CASE("collision_penalty: spaced, coincident, equilateral triangle") {
    RunConfig cfg;
    World w = empty_world(cfg);
    w.uavs.push_back(uav_at(10, 10, 20));
    w.uavs.push_back(uav_at(40, 10, 20));
    w.uavs.push_back(uav_at(10, 40, 20));
    CHECK(collision_penalty(w, cfg.d_safe) == 0.0);

    w.uavs[1].pos = w.uavs[0].pos;
    CHECK(collision_penalty(w, cfg.d_safe) == doctest::Approx(1.0).epsilon(1e-12));
    w.uavs[2].pos = {200, 200, 20};
    CHECK(collision_penalty(w, cfg.d_safe) == 1.0);

    // Equilateral triangle with side 2.5: three pairs, each 1 - 2.5/5 = 0.5.
    w.uavs[0].pos = {50.0, 50.0, 20.0};
    w.uavs[1].pos = {52.5, 50.0, 20.0};
    w.uavs[2].pos = {51.25, 50.0 + 2.5 * std::sqrt(3.0) / 2.0, 20.0};
    CHECK(collision_penalty(w, cfg.d_safe) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("flight_penalty: hover, lateral, climb") {
    RunConfig cfg;
    const std::vector<Action> all_stay(5, Action{Move::Stay, 0});
    CHECK(flight_penalty(all_stay, cfg) == 5.0);

    const std::vector<Action> mixed = {{Move::Stay, 0}, {Move::North, 1}, {Move::Up, 2}};
    CHECK(flight_penalty(mixed, cfg) == 1.0 + 1.5 + 2.0);

    double want = 0.0;
    for (const Action& a : mixed) want += step_energy(a, cfg);
    CHECK(flight_penalty(mixed, cfg) == want);
}

TEST_CASE("cooperation_bonus: ideal pairing, degenerate balance, single UAV") {
    RunConfig cfg;
    World w = empty_world(cfg);
    w.uavs.push_back(uav_at(30, 60, 20));
    w.uavs.push_back(uav_at(60, 60, 20));  // exactly d_ideal apart

    CHECK(cooperation_bonus(w, {0, 1}, cfg) == 1.0);

    // One UAV takes all four pairs: balance hits its floor of zero.
    w.uavs[1].pos = {120, 60, 20};
    const double spacing = std::exp(-(90.0 - 30.0) * (90.0 - 30.0) / (2.0 * 15.0 * 15.0));
    CHECK(cooperation_bonus(w, {0, 0, 0, 0}, cfg) ==
          doctest::Approx(0.5 * spacing).epsilon(1e-12));

    World solo = empty_world(cfg);
    solo.uavs.push_back(uav_at(5, 5, 20));
    CHECK(cooperation_bonus(solo, {0, 0, 0}, cfg) == 1.0);
}

TEST_CASE("cooperation_bonus: formula recomputation and range on random scenes") {
    RunConfig cfg;
    Rng rng(61);
    for (int scene = 0; scene < 80; ++scene) {
        const World w = make_world(cfg, rng);
        std::vector<int> assignment(cfg.n_pairs);
        for (int& a : assignment) a = rng.uniform_int(cfg.n_uavs);

        std::vector<double> counts(cfg.n_uavs, 0.0);
        for (int a : assignment) counts[a] += 1.0;
        const double mean = static_cast<double>(cfg.n_pairs) / cfg.n_uavs;
        double var = 0.0;
        for (double c : counts) var += (c - mean) * (c - mean);
        var /= cfg.n_uavs;
        const double var_max =
            ((cfg.n_pairs - mean) * (cfg.n_pairs - mean) + (cfg.n_uavs - 1) * mean * mean) /
            cfg.n_uavs;
        const double balance = 1.0 - var / var_max;

        double sum = 0.0;
        int pairs = 0;
        for (int i = 0; i < cfg.n_uavs; ++i) {
            for (int j = i + 1; j < cfg.n_uavs; ++j) {
                const double dev = distance(w.uavs[i].pos, w.uavs[j].pos) - cfg.d_ideal;
                sum += std::exp(-dev * dev / (2.0 * cfg.sigma_d * cfg.sigma_d));
                ++pairs;
            }
        }
        const double want = 0.5 * balance + 0.5 * (sum / pairs);
        const double got = cooperation_bonus(w, assignment, cfg);
        CHECK(rel_err(got, want) < 1e-12);
        CHECK(got >= 0.0);
        CHECK(got <= 1.0);
    }
}

TEST_CASE("global_reward: zeros, throughput projection, weighted hand case") {
    const RewardWeights w;
    CHECK(global_reward(0.0, 0.0, 0.0, 0.0, w) == 0.0);
    CHECK(global_reward(3.25, 0.0, 0.0, 0.0, w) == 3.25);

    const double got = global_reward(2.0, 0.5, 0.25, 5.0, w);
    CHECK(got == doctest::Approx(2.0 + 0.2 * 0.5 - 2.0 * 0.25 - 0.05 * 5.0).epsilon(1e-14));
    CHECK(got == doctest::Approx(1.35).epsilon(1e-12));

    RewardWeights heavy;
    heavy.col = 4.0;
    CHECK(global_reward(2.0, 0.5, 0.25, 5.0, heavy) < got);
}

TEST_CASE("individual_reward: idle agent, assignment bonus, collision share") {
    const IndividualCoeffs c;
    CHECK(individual_reward(2, 0.0, {0, 1, 0, 1}, 0.0, c) == 0.0);
    CHECK(individual_reward(1, 0.0, {1, 1, 1}, 0.0, c) == doctest::Approx(0.3).epsilon(1e-14));

    const double got = individual_reward(1, 1.5, {0, 1, 1, 0}, 0.3, c);
    CHECK(got == doctest::Approx(1.5 + 0.1 * 2.0 - 0.3).epsilon(1e-12));

    // The collision term is shared: every agent pays the same penalty.
    const double a0 = individual_reward(0, 0.0, {1, 1}, 0.7, c);
    const double a1 = individual_reward(1, 0.0, {1, 1}, 0.7, c) - 0.1 * 2.0;
    CHECK(a0 == doctest::Approx(a1).epsilon(1e-12));
}

TEST_CASE("homeostatic_update: dormant before curriculum threshold") {
    RunConfig cfg;
    RewardWeights w;
    w.thr = 1.7;
    w.col = 0.9;
    for (double progress : {0.0, 0.3, 0.5, 0.79, 0.799999}) {
        const RewardWeights out = homeostatic_update(w, 0.5, 1.0, progress, cfg);
        CHECK(out.thr == w.thr);
        CHECK(out.coop == w.coop);
        CHECK(out.col == w.col);
        CHECK(out.fly == w.fly);
    }
}

TEST_CASE("homeostatic_update: nudge direction once active") {
    RunConfig cfg;
    RewardWeights w;

    // Collisions above target: lean harder on the collision term.
    RewardWeights hot = homeostatic_update(w, 0.5, 1.0, 0.9, cfg);
    CHECK(hot.col == w.col * 1.01);
    CHECK(hot.thr == w.thr * 0.99);
    CHECK(hot.coop == w.coop);
    CHECK(hot.fly == w.fly);

    // Collisions under target: release pressure toward throughput.
    RewardWeights cold = homeostatic_update(w, 0.001, 1.0, 0.9, cfg);
    CHECK(cold.col == w.col * 0.99);
    CHECK(cold.thr == w.thr * 1.01);

    // progress == curriculum_frac is already active.
    RewardWeights edge = homeostatic_update(w, 0.5, 1.0, cfg.curriculum_frac, cfg);
    CHECK(edge.col == w.col * 1.01);
}

TEST_CASE("homeostatic_update: repeated nudges saturate at the clamp bounds") {
    RunConfig cfg;
    RewardWeights w;
    for (int k = 0; k < 2000; ++k) {
        w = homeostatic_update(w, 1.0, 1.0, 0.95, cfg);
        CHECK(w.col <= cfg.weight_ceiling);
        CHECK(w.col >= cfg.weight_floor);
        CHECK(w.thr <= cfg.weight_ceiling);
        CHECK(w.thr >= cfg.weight_floor);
    }
    CHECK(w.col == cfg.weight_ceiling);
    CHECK(w.thr == cfg.weight_floor);

    for (int k = 0; k < 2000; ++k) w = homeostatic_update(w, 0.0, 1.0, 0.95, cfg);
    CHECK(w.col == cfg.weight_floor);
    CHECK(w.thr == cfg.weight_ceiling);
}

TEST_CASE("step_rewards: breakdown reassembles exactly") {
    RunConfig cfg;
    Rng rng(67);
    const RewardWeights w;
    const IndividualCoeffs c;
    for (int scene = 0; scene < 30; ++scene) {
        const World world = make_world(cfg, rng);
        std::vector<Action> actions(cfg.n_uavs);
        for (Action& a : actions)
            a = {static_cast<Move>(rng.uniform_int(kNumMoves)), rng.uniform_int(kNumPowers)};
        const std::vector<int> assignment = assign_gcvs(world);
        const std::vector<double> rates = pair_rates(world, cfg, assignment);

        const RewardBreakdown b = step_rewards(world, actions, assignment, rates, w, c, cfg);

        double bps = 0.0;
        for (double r : rates) bps += r;
        CHECK(b.throughput_bps == bps);
        CHECK(b.throughput_norm == bps / cfg.bandwidth_hz);
        CHECK(b.coop_bonus == cooperation_bonus(world, assignment, cfg));
        CHECK(b.p_col == collision_penalty(world, cfg.d_safe));
        CHECK(b.p_fly == flight_penalty(actions, cfg));
        CHECK(b.global_r == global_reward(b.throughput_norm, b.coop_bonus, b.p_col, b.p_fly, w));

        REQUIRE(static_cast<int>(b.individual_r.size()) == cfg.n_uavs);
        for (int i = 0; i < cfg.n_uavs; ++i) {
            double own = 0.0;
            for (int n = 0; n < cfg.n_pairs; ++n)
                if (assignment[n] == i) own += rates[n];
            CHECK(b.individual_r[i] ==
                  individual_reward(i, own / cfg.bandwidth_hz, assignment, b.p_col, c));
        }
    }
}

TEST_CASE("step_rewards: raising one pair rate raises global and owner rewards") {
    RunConfig cfg;
    Rng rng(71);
    const World world = make_world(cfg, rng);
    const std::vector<Action> actions(cfg.n_uavs, Action{Move::Stay, 0});
    const std::vector<int> assignment = assign_gcvs(world);
    std::vector<double> rates = pair_rates(world, cfg, assignment);
    const RewardWeights w;
    const IndividualCoeffs c;

    const RewardBreakdown before = step_rewards(world, actions, assignment, rates, w, c, cfg);
    const int owner = assignment[0];
    rates[0] += 2.0 * cfg.bandwidth_hz;
    const RewardBreakdown after = step_rewards(world, actions, assignment, rates, w, c, cfg);

    CHECK(after.global_r > before.global_r);
    CHECK(after.individual_r[owner] > before.individual_r[owner]);
    CHECK(after.global_r == doctest::Approx(before.global_r + w.thr * 2.0).epsilon(1e-9));
    for (int i = 0; i < cfg.n_uavs; ++i)
        if (i != owner) CHECK(after.individual_r[i] == before.individual_r[i]);
}
