#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "relaysim/geometry.hpp"

namespace relaysim {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Every tunable in one place. Defaults follow the reference scenario
// (120 m arena, 5 UAVs / 5 ground pairs / 2 jammers) and the training
// schedule it was evaluated with.
struct RunConfig {
    // environment
    double area_side = 120.0;  // L, ground area is [0,L]^2
    double h_min = 15.0;
    double h_max = 35.0;
    int n_uavs = 5;
    int n_pairs = 5;
    std::vector<Vec3> jammer_positions = {{20.0, 20.0, 15.0}, {80.0, 80.0, 15.0}};
    double jammer_power = 0.5;          // W
    double bandwidth_hz = 1.23e6;
    std::vector<double> power_levels = {0.05, 0.12, 0.25};  // W, indexed by power_index
    double path_loss_alpha = 2.0;
    double noise_power = 1e-10;         // W
    double step_xy = 10.0;              // m per horizontal move
    double step_z = 5.0;                // m per vertical move
    double gcv_speed_max = 2.0;         // m/s
    int gcv_turn_period = 10;           // steps between velocity re-draws
    double gcv_tx_power = 0.25;         // W, fixed source-user uplink power
    double energy_hover = 1.0;
    double energy_move = 0.5;
    double energy_climb = 0.5;
    double initial_energy = 1e4;
    int k_nearest = 3;                  // pairs visible in each observation
    double d_safe = 5.0;                // m, collision threshold

    // rewards
    double w_thr = 1.0;
    double w_coop = 0.2;
    double w_col = 2.0;
    double w_fly = 0.05;
    double weight_floor = 0.1;
    double weight_ceiling = 5.0;
    double alpha_thr = 1.0;
    double alpha_assign = 0.1;
    double alpha_col = 1.0;
    double d_ideal = 30.0;              // m, preferred inter-UAV spacing
    double sigma_d = 15.0;
    double collision_rate_target = 0.01;
    int collision_window = 200;         // steps
    double curriculum_frac = 0.8;       // homeostatic adaptation enabled past this progress

    // networks
    std::vector<int> actor_hidden = {128, 128};
    std::vector<int> critic_hidden = {256, 256};
    double huber_delta = 1.0;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    double grad_clip = 10.0;

    // replay
    int buffer_capacity = 100000;
    double per_alpha = 0.6;
    double per_beta_start = 0.4;
    double per_beta_end = 1.0;
    double per_eps = 1e-3;

    // training
    long long total_steps = 1200000;
    int batch_size = 320;
    double gamma = 0.95;
    double tau = 0.010;
    int target_update_period = 200;     // steps between soft target updates
    double eps_start = 1.0;
    double eps_final = 0.05;
    double eps_decay_frac = 0.8;        // linear decay over this fraction of total steps
    double lambda_adv = 0.5;            // weight of the global advantage in actor targets
    int episode_length = 400;
    int warmup_steps = 5000;
    double actor_lr = 4e-4;
    double critic_lr = 3e-4;
    long long checkpoint_period = 10000;

    // baselines
    double repulse_gain = 2.0;
    double repulse_radius = 15.0;
    double spacing_gain = 1.0;
    double spacing_scale = 10.0;
    double cruise_altitude = 25.0;

    // harness
    int smoothing_window = 50;          // episodes, metric moving average

    int obs_dim() const { return 5 + 5 * k_nearest; }
    int state_dim() const { return 5 * n_uavs + 4 * n_pairs; }
    int n_jammers() const { return static_cast<int>(jammer_positions.size()); }

    // Throws ConfigError on the first violated constraint.
    void validate() const;
};

// Parses a key = value config file. Keys not present keep their defaults;
// unknown keys are an error. Lists are comma separated, jammer positions are
// "x y z" triples separated by ';'.
RunConfig load_config(const std::string& path);

// Applies one key/value override to an existing config (no validation).
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value);

// Serializes every key in load_config format; parsing the result reproduces cfg.
std::string config_to_text(const RunConfig& cfg);

}  // namespace relaysim
