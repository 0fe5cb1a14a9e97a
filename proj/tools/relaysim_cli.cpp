#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "relaysim/config.hpp"
#include "relaysim/harness.hpp"
#include "relaysim/metrics.hpp"
#include "relaysim/trainer.hpp"

namespace fs = std::filesystem;
using namespace relaysim;

namespace {

RunConfig resolve_config(const std::string& config_path, long long steps_override) {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (steps_override > 0) cfg.total_steps = steps_override;
    cfg.validate();
    return cfg;
}

void run_train_bundle(const RunConfig& cfg, uint64_t seed, const std::string& out_dir) {
    fs::create_directories(out_dir);
    write_manifest(cfg, seed, "train", {}, out_dir + "/manifest.txt");
    std::vector<EpisodeMetrics> rows;
    train(cfg, seed, out_dir, &rows);
    export_metrics(rows, out_dir + "/metrics.csv", cfg.smoothing_window);
}

int cmd_train(const std::string& config_path, long long steps, const std::string& out_dir,
              uint64_t seed, const std::vector<uint64_t>& seeds) {
    const RunConfig cfg = resolve_config(config_path, steps);
    if (seeds.empty()) {
        run_train_bundle(cfg, seed, out_dir);
        std::cout << "trained " << cfg.total_steps << " steps, outputs in " << out_dir << "\n";
        return 0;
    }
    // Independent bundles, one thread each, separate output directories.
    std::vector<std::thread> workers;
    workers.reserve(seeds.size());
    for (uint64_t s : seeds)
        workers.emplace_back([&cfg, s, &out_dir] {
            run_train_bundle(cfg, s, out_dir + "/seed_" + std::to_string(s));
        });
    for (std::thread& w : workers) w.join();
    std::cout << "trained " << seeds.size() << " seeds, outputs in " << out_dir << "\n";
    return 0;
}

int cmd_eval(const std::string& config_path, const std::string& policy,
             const std::string& checkpoint, int episodes, uint64_t seed,
             const std::string& out_dir, bool heuristics_only) {
    if (heuristics_only && policy == "ctde")
        throw std::invalid_argument("baseline mode runs heuristic policies; use eval for ctde");
    const RunConfig cfg = resolve_config(config_path, 0);
    fs::create_directories(out_dir);
    const std::vector<EpisodeMetrics> rows = run_eval(cfg, policy, checkpoint, episodes, seed);
    write_manifest(cfg, seed, heuristics_only ? "baseline" : "eval",
                   {"policy: " + policy, "episodes: " + std::to_string(episodes)},
                   out_dir + "/manifest.txt");
    export_metrics(rows, out_dir + "/metrics.csv", cfg.smoothing_window);
    double mean_reward = 0.0, mean_thr = 0.0;
    for (const EpisodeMetrics& r : rows) {
        mean_reward += r.mean_global_reward;
        mean_thr += r.throughput_norm;
    }
    mean_reward /= rows.size();
    mean_thr /= rows.size();
    std::cout << policy << ": mean reward " << mean_reward << ", mean normalized throughput "
              << mean_thr << " over " << episodes << " episodes; outputs in " << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Jammed multi-UAV relay simulator and CTDE training stack"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", policy = "random", checkpoint;
    uint64_t seed = 0;
    long long steps = 0;
    int episodes = 100;
    std::vector<uint64_t> seeds;

    CLI::App* train_cmd = app.add_subcommand("train", "Train the CTDE agents");
    train_cmd->add_option("--config", config_path, "Config file (key = value)");
    train_cmd->add_option("--seed", seed, "RNG seed");
    train_cmd->add_option("--steps", steps, "Override total training steps");
    train_cmd->add_option("--out", out_dir, "Output directory");
    train_cmd->add_option("--seeds", seeds, "Comma-separated seed batch (one run each)")
        ->delimiter(',');

    auto add_eval_flags = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Config file (key = value)");
        cmd->add_option("--seed", seed, "RNG seed");
        cmd->add_option("--out", out_dir, "Output directory");
        cmd->add_option("--policy", policy,
                        "random | safe_greedy | spacing_coop | safe_greedy_p1 | "
                        "spacing_coop_p1 | ctde");
        cmd->add_option("--checkpoint", checkpoint, "Checkpoint path (required for ctde)");
        cmd->add_option("--episodes", episodes, "Number of evaluation episodes");
    };
    CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a policy");
    add_eval_flags(eval_cmd);
    CLI::App* baseline_cmd = app.add_subcommand("baseline", "Evaluate a heuristic baseline");
    add_eval_flags(baseline_cmd);

    CLI11_PARSE(app, argc, argv);

    try {
        if (train_cmd->parsed()) return cmd_train(config_path, steps, out_dir, seed, seeds);
        if (eval_cmd->parsed())
            return cmd_eval(config_path, policy, checkpoint, episodes, seed, out_dir, false);
        if (baseline_cmd->parsed())
            return cmd_eval(config_path, policy, checkpoint, episodes, seed, out_dir, true);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
