#include "relaysim/checkpoint.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace relaysim {

namespace {

constexpr char kMagic[8] = {'R', 'S', 'C', 'P', '0', '0', '0', '1'};

void write_i32(std::ostream& out, int32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); }
void write_i64(std::ostream& out, int64_t v) { out.write(reinterpret_cast<const char*>(&v), 8); }
void write_doubles(std::ostream& out, const std::vector<double>& v) {
    out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * 8));
}

int32_t read_i32(std::istream& in) {
    int32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), 4);
    if (!in) throw std::runtime_error("checkpoint: truncated file");
    return v;
}
int64_t read_i64(std::istream& in) {
    int64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), 8);
    if (!in) throw std::runtime_error("checkpoint: truncated file");
    return v;
}
std::vector<double> read_doubles(std::istream& in, size_t n) {
    std::vector<double> v(n);
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * 8));
    if (!in) throw std::runtime_error("checkpoint: truncated file");
    return v;
}

void write_net(std::ostream& out, const MlpNet& net) {
    write_i32(out, static_cast<int32_t>(net.sizes.size()));
    for (int s : net.sizes) write_i32(out, s);
    write_i64(out, static_cast<int64_t>(net.params.size()));
    write_doubles(out, net.params);
}

MlpNet read_net(std::istream& in) {
    MlpNet net;
    const int32_t n_sizes = read_i32(in);
    if (n_sizes < 2 || n_sizes > 64) throw std::runtime_error("checkpoint: corrupt layer count");
    net.sizes.resize(n_sizes);
    for (int32_t k = 0; k < n_sizes; ++k) {
        net.sizes[k] = read_i32(in);
        if (net.sizes[k] <= 0) throw std::runtime_error("checkpoint: corrupt layer size");
    }
    const int64_t n_params = read_i64(in);
    if (n_params != static_cast<int64_t>(net.param_count()))
        throw std::runtime_error("checkpoint: parameter count mismatch");
    net.params = read_doubles(in, static_cast<size_t>(n_params));
    return net;
}

void write_normalizer(std::ostream& out, const Normalizer& n) {
    write_i32(out, n.dim());
    write_i64(out, n.count());
    write_doubles(out, n.raw_mean());
    write_doubles(out, n.raw_m2());
}

Normalizer read_normalizer(std::istream& in) {
    const int32_t dim = read_i32(in);
    if (dim <= 0 || dim > 1 << 20) throw std::runtime_error("checkpoint: corrupt normalizer dim");
    const int64_t count = read_i64(in);
    std::vector<double> mean = read_doubles(in, dim);
    std::vector<double> m2 = read_doubles(in, dim);
    Normalizer n(dim);
    n.restore(count, std::move(mean), std::move(m2));
    return n;
}

}  // namespace

void save_checkpoint(const CtdeAgents& agents, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("checkpoint: cannot open for writing: " + path);
    out.write(kMagic, 8);
    write_i32(out, agents.n_agents);
    for (const MlpNet& net : agents.actors) write_net(out, net);
    for (const MlpNet& net : agents.actor_targets) write_net(out, net);
    write_net(out, agents.critic);
    write_net(out, agents.critic_target);
    write_normalizer(out, agents.obs_norm);
    write_normalizer(out, agents.state_norm);
    if (!out) throw std::runtime_error("checkpoint: write failed: " + path);
}

CtdeAgents load_checkpoint(const std::string& path, const RunConfig& cfg) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("checkpoint: cannot open: " + path);
    char magic[8] = {};
    in.read(magic, 8);
    if (!in || !std::equal(magic, magic + 8, kMagic))
        throw std::runtime_error("checkpoint: unrecognized format tag");
    const int32_t n_agents = read_i32(in);
    if (n_agents != cfg.n_uavs)
        throw std::runtime_error("checkpoint: agent count does not match config");
    CtdeAgents agents;
    agents.n_agents = n_agents;
    agents.actors.reserve(n_agents);
    for (int32_t i = 0; i < n_agents; ++i) agents.actors.push_back(read_net(in));
    agents.actor_targets.reserve(n_agents);
    for (int32_t i = 0; i < n_agents; ++i) agents.actor_targets.push_back(read_net(in));
    agents.critic = read_net(in);
    agents.critic_target = read_net(in);
    agents.obs_norm = read_normalizer(in);
    agents.state_norm = read_normalizer(in);
    for (const MlpNet& net : agents.actors) {
        if (net.input_dim() != cfg.obs_dim() || net.output_dim() != kNumActions)
            throw std::runtime_error("checkpoint: actor shape does not match config");
    }
    if (agents.critic.input_dim() != cfg.state_dim() || agents.critic.output_dim() != 1)
        throw std::runtime_error("checkpoint: critic shape does not match config");
    if (agents.obs_norm.dim() != cfg.obs_dim() || agents.state_norm.dim() != cfg.state_dim())
        throw std::runtime_error("checkpoint: normalizer shape does not match config");
    for (int i = 0; i < n_agents; ++i)
        agents.actor_opt.push_back(AdamState::make(agents.actors[i].param_count(), cfg.actor_lr,
                                                   cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps));
    agents.critic_opt = AdamState::make(agents.critic.param_count(), cfg.critic_lr, cfg.adam_beta1,
                                        cfg.adam_beta2, cfg.adam_eps);
    return agents;
}

}  // namespace relaysim
