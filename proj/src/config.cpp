#include "relaysim/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace relaysim {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse '" + v + "' as a number");
    }
}

long long parse_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        long long i = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse '" + v + "' as an integer");
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    for (const auto& tok : split(v, ',')) out.push_back(parse_double(key, tok));
    return out;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& v) {
    std::vector<int> out;
    for (const auto& tok : split(v, ',')) out.push_back(static_cast<int>(parse_int(key, tok)));
    return out;
}

std::vector<Vec3> parse_vec3_list(const std::string& key, const std::string& v) {
    std::vector<Vec3> out;
    for (const auto& tok : split(v, ';')) {
        std::stringstream ss(tok);
        Vec3 p;
        if (!(ss >> p.x >> p.y >> p.z))
            throw ConfigError("config key '" + key + "': expected 'x y z' triple, got '" + tok + "'");
        std::string rest;
        if (ss >> rest)
            throw ConfigError("config key '" + key + "': trailing text in triple '" + tok + "'");
        out.push_back(p);
    }
    return out;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_list(const std::vector<double>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
    return s;
}

std::string fmt_list(const std::vector<int>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
    return s;
}

std::string fmt_list(const std::vector<Vec3>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i)
        s += (i ? "; " : "") + fmt(v[i].x) + " " + fmt(v[i].y) + " " + fmt(v[i].z);
    return s;
}

}  // namespace

void apply_config_entry(RunConfig& c, const std::string& key, const std::string& value) {
    using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;
    auto d = [](double RunConfig::* f) {
        return Setter([f](RunConfig& c, const std::string& k, const std::string& v) { c.*f = parse_double(k, v); });
    };
    auto i = [](int RunConfig::* f) {
        return Setter([f](RunConfig& c, const std::string& k, const std::string& v) {
            c.*f = static_cast<int>(parse_int(k, v));
        });
    };
    auto ll = [](long long RunConfig::* f) {
        return Setter([f](RunConfig& c, const std::string& k, const std::string& v) { c.*f = parse_int(k, v); });
    };

    static const std::map<std::string, Setter> setters = {
        {"area_side", d(&RunConfig::area_side)},
        {"h_min", d(&RunConfig::h_min)},
        {"h_max", d(&RunConfig::h_max)},
        {"n_uavs", i(&RunConfig::n_uavs)},
        {"n_pairs", i(&RunConfig::n_pairs)},
        {"jammer_positions",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.jammer_positions = parse_vec3_list(k, v); }},
        {"jammer_power", d(&RunConfig::jammer_power)},
        {"bandwidth_hz", d(&RunConfig::bandwidth_hz)},
        {"power_levels",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.power_levels = parse_double_list(k, v); }},
        {"path_loss_alpha", d(&RunConfig::path_loss_alpha)},
        {"noise_power", d(&RunConfig::noise_power)},
        {"step_xy", d(&RunConfig::step_xy)},
        {"step_z", d(&RunConfig::step_z)},
        {"gcv_speed_max", d(&RunConfig::gcv_speed_max)},
        {"gcv_turn_period", i(&RunConfig::gcv_turn_period)},
        {"gcv_tx_power", d(&RunConfig::gcv_tx_power)},
        {"energy_hover", d(&RunConfig::energy_hover)},
        {"energy_move", d(&RunConfig::energy_move)},
        {"energy_climb", d(&RunConfig::energy_climb)},
        {"initial_energy", d(&RunConfig::initial_energy)},
        {"k_nearest", i(&RunConfig::k_nearest)},
        {"d_safe", d(&RunConfig::d_safe)},
        {"w_thr", d(&RunConfig::w_thr)},
        {"w_coop", d(&RunConfig::w_coop)},
        {"w_col", d(&RunConfig::w_col)},
        {"w_fly", d(&RunConfig::w_fly)},
        {"weight_floor", d(&RunConfig::weight_floor)},
        {"weight_ceiling", d(&RunConfig::weight_ceiling)},
        {"alpha_thr", d(&RunConfig::alpha_thr)},
        {"alpha_assign", d(&RunConfig::alpha_assign)},
        {"alpha_col", d(&RunConfig::alpha_col)},
        {"d_ideal", d(&RunConfig::d_ideal)},
        {"sigma_d", d(&RunConfig::sigma_d)},
        {"collision_rate_target", d(&RunConfig::collision_rate_target)},
        {"collision_window", i(&RunConfig::collision_window)},
        {"curriculum_frac", d(&RunConfig::curriculum_frac)},
        {"actor_hidden",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.actor_hidden = parse_int_list(k, v); }},
        {"critic_hidden",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.critic_hidden = parse_int_list(k, v); }},
        {"huber_delta", d(&RunConfig::huber_delta)},
        {"adam_beta1", d(&RunConfig::adam_beta1)},
        {"adam_beta2", d(&RunConfig::adam_beta2)},
        {"adam_eps", d(&RunConfig::adam_eps)},
        {"grad_clip", d(&RunConfig::grad_clip)},
        {"buffer_capacity", i(&RunConfig::buffer_capacity)},
        {"per_alpha", d(&RunConfig::per_alpha)},
        {"per_beta_start", d(&RunConfig::per_beta_start)},
        {"per_beta_end", d(&RunConfig::per_beta_end)},
        {"per_eps", d(&RunConfig::per_eps)},
        {"total_steps", ll(&RunConfig::total_steps)},
        {"batch_size", i(&RunConfig::batch_size)},
        {"gamma", d(&RunConfig::gamma)},
        {"tau", d(&RunConfig::tau)},
        {"target_update_period", i(&RunConfig::target_update_period)},
        {"eps_start", d(&RunConfig::eps_start)},
        {"eps_final", d(&RunConfig::eps_final)},
        {"eps_decay_frac", d(&RunConfig::eps_decay_frac)},
        {"lambda_adv", d(&RunConfig::lambda_adv)},
        {"episode_length", i(&RunConfig::episode_length)},
        {"warmup_steps", i(&RunConfig::warmup_steps)},
        {"actor_lr", d(&RunConfig::actor_lr)},
        {"critic_lr", d(&RunConfig::critic_lr)},
        {"checkpoint_period", ll(&RunConfig::checkpoint_period)},
        {"repulse_gain", d(&RunConfig::repulse_gain)},
        {"repulse_radius", d(&RunConfig::repulse_radius)},
        {"spacing_gain", d(&RunConfig::spacing_gain)},
        {"spacing_scale", d(&RunConfig::spacing_scale)},
        {"cruise_altitude", d(&RunConfig::cruise_altitude)},
        {"smoothing_window", i(&RunConfig::smoothing_window)},
    };

    auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown config key '" + key + "'");
    it->second(c, key, value);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");

    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value', got '" + s + "'");
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        apply_config_entry(cfg, key, value);
    }
    cfg.validate();
    return cfg;
}

void RunConfig::validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError("invalid config: " + msg); };

    if (area_side <= 0.0) fail("area_side must be positive");
    if (h_min <= 0.0) fail("h_min must be positive");
    if (h_min >= h_max) fail("h_min must be below h_max");
    if (n_uavs < 1) fail("n_uavs must be at least 1");
    if (n_pairs < 1) fail("n_pairs must be at least 1");
    if (jammer_positions.empty()) fail("at least one jammer position required");
    if (jammer_power <= 0.0) fail("jammer_power must be positive");
    if (bandwidth_hz <= 0.0) fail("bandwidth_hz must be positive");
    if (power_levels.size() != 3) fail("power_levels must list exactly 3 levels");
    for (double p : power_levels)
        if (p <= 0.0) fail("power_levels must all be positive");
    if (gcv_tx_power <= 0.0) fail("gcv_tx_power must be positive");
    if (noise_power <= 0.0) fail("noise_power must be positive");
    if (path_loss_alpha <= 0.0) fail("path_loss_alpha must be positive");
    if (step_xy <= 0.0 || step_z <= 0.0) fail("movement step sizes must be positive");
    if (gcv_speed_max < 0.0) fail("gcv_speed_max must be nonnegative");
    if (gcv_turn_period < 1) fail("gcv_turn_period must be at least 1");
    if (initial_energy <= 0.0) fail("initial_energy must be positive");
    if (k_nearest < 1 || k_nearest > n_pairs) fail("k_nearest must be in [1, n_pairs]");
    if (d_safe <= 0.0) fail("d_safe must be positive");
    if (w_thr < 0.0 || w_coop < 0.0 || w_col < 0.0 || w_fly < 0.0) fail("reward weights must be nonnegative");
    if (weight_floor <= 0.0 || weight_floor > weight_ceiling) fail("need 0 < weight_floor <= weight_ceiling");
    if (alpha_thr < 0.0 || alpha_assign < 0.0 || alpha_col < 0.0) fail("individual coefficients must be nonnegative");
    if (sigma_d <= 0.0) fail("sigma_d must be positive");
    if (collision_window < 1) fail("collision_window must be at least 1");
    if (curriculum_frac < 0.0 || curriculum_frac > 1.0) fail("curriculum_frac must be in [0, 1]");
    for (int h : actor_hidden)
        if (h < 1) fail("actor_hidden sizes must be positive");
    for (int h : critic_hidden)
        if (h < 1) fail("critic_hidden sizes must be positive");
    if (huber_delta <= 0.0) fail("huber_delta must be positive");
    if (grad_clip <= 0.0) fail("grad_clip must be positive");
    if (buffer_capacity < 1) fail("buffer_capacity must be at least 1");
    if (batch_size < 1) fail("batch_size must be at least 1");
    if (batch_size > buffer_capacity) fail("batch_size cannot exceed buffer_capacity");
    if (per_alpha < 0.0) fail("per_alpha must be nonnegative");
    if (per_beta_start < 0.0 || per_beta_end < per_beta_start) fail("need 0 <= per_beta_start <= per_beta_end");
    if (per_eps <= 0.0) fail("per_eps must be positive");
    if (total_steps < 1) fail("total_steps must be at least 1");
    if (gamma < 0.0 || gamma >= 1.0) fail("gamma must be in [0, 1)");
    if (tau < 0.0 || tau > 1.0) fail("tau must be in [0, 1]");
    if (target_update_period < 1) fail("target_update_period must be at least 1");
    if (eps_start < 0.0 || eps_start > 1.0 || eps_final < 0.0 || eps_final > eps_start)
        fail("need 0 <= eps_final <= eps_start <= 1");
    if (eps_decay_frac <= 0.0 || eps_decay_frac > 1.0) fail("eps_decay_frac must be in (0, 1]");
    if (episode_length < 1) fail("episode_length must be at least 1");
    if (warmup_steps < batch_size) fail("warmup_steps must be at least batch_size");
    if (actor_lr <= 0.0 || critic_lr <= 0.0) fail("learning rates must be positive");
    if (checkpoint_period < 1) fail("checkpoint_period must be at least 1");
    if (repulse_radius <= 0.0 || spacing_scale <= 0.0) fail("baseline radii must be positive");
    if (cruise_altitude < h_min || cruise_altitude > h_max) fail("cruise_altitude must lie in [h_min, h_max]");
    if (smoothing_window < 1) fail("smoothing_window must be at least 1");
}

std::string config_to_text(const RunConfig& c) {
    std::ostringstream out;
    out << "area_side = " << fmt(c.area_side) << "\n";
    out << "h_min = " << fmt(c.h_min) << "\n";
    out << "h_max = " << fmt(c.h_max) << "\n";
    out << "n_uavs = " << c.n_uavs << "\n";
    out << "n_pairs = " << c.n_pairs << "\n";
    out << "jammer_positions = " << fmt_list(c.jammer_positions) << "\n";
    out << "jammer_power = " << fmt(c.jammer_power) << "\n";
    out << "bandwidth_hz = " << fmt(c.bandwidth_hz) << "\n";
    out << "power_levels = " << fmt_list(c.power_levels) << "\n";
    out << "path_loss_alpha = " << fmt(c.path_loss_alpha) << "\n";
    out << "noise_power = " << fmt(c.noise_power) << "\n";
    out << "step_xy = " << fmt(c.step_xy) << "\n";
    out << "step_z = " << fmt(c.step_z) << "\n";
    out << "gcv_speed_max = " << fmt(c.gcv_speed_max) << "\n";
    out << "gcv_turn_period = " << c.gcv_turn_period << "\n";
    out << "gcv_tx_power = " << fmt(c.gcv_tx_power) << "\n";
    out << "energy_hover = " << fmt(c.energy_hover) << "\n";
    out << "energy_move = " << fmt(c.energy_move) << "\n";
    out << "energy_climb = " << fmt(c.energy_climb) << "\n";
    out << "initial_energy = " << fmt(c.initial_energy) << "\n";
    out << "k_nearest = " << c.k_nearest << "\n";
    out << "d_safe = " << fmt(c.d_safe) << "\n";
    out << "w_thr = " << fmt(c.w_thr) << "\n";
    out << "w_coop = " << fmt(c.w_coop) << "\n";
    out << "w_col = " << fmt(c.w_col) << "\n";
    out << "w_fly = " << fmt(c.w_fly) << "\n";
    out << "weight_floor = " << fmt(c.weight_floor) << "\n";
    out << "weight_ceiling = " << fmt(c.weight_ceiling) << "\n";
    out << "alpha_thr = " << fmt(c.alpha_thr) << "\n";
    out << "alpha_assign = " << fmt(c.alpha_assign) << "\n";
    out << "alpha_col = " << fmt(c.alpha_col) << "\n";
    out << "d_ideal = " << fmt(c.d_ideal) << "\n";
    out << "sigma_d = " << fmt(c.sigma_d) << "\n";
    out << "collision_rate_target = " << fmt(c.collision_rate_target) << "\n";
    out << "collision_window = " << c.collision_window << "\n";
    out << "curriculum_frac = " << fmt(c.curriculum_frac) << "\n";
    out << "actor_hidden = " << fmt_list(c.actor_hidden) << "\n";
    out << "critic_hidden = " << fmt_list(c.critic_hidden) << "\n";
    out << "huber_delta = " << fmt(c.huber_delta) << "\n";
    out << "adam_beta1 = " << fmt(c.adam_beta1) << "\n";
    out << "adam_beta2 = " << fmt(c.adam_beta2) << "\n";
    out << "adam_eps = " << fmt(c.adam_eps) << "\n";
    out << "grad_clip = " << fmt(c.grad_clip) << "\n";
    out << "buffer_capacity = " << c.buffer_capacity << "\n";
    out << "per_alpha = " << fmt(c.per_alpha) << "\n";
    out << "per_beta_start = " << fmt(c.per_beta_start) << "\n";
    out << "per_beta_end = " << fmt(c.per_beta_end) << "\n";
    out << "per_eps = " << fmt(c.per_eps) << "\n";
    out << "total_steps = " << c.total_steps << "\n";
    out << "batch_size = " << c.batch_size << "\n";
    out << "gamma = " << fmt(c.gamma) << "\n";
    out << "tau = " << fmt(c.tau) << "\n";
    out << "target_update_period = " << c.target_update_period << "\n";
    out << "eps_start = " << fmt(c.eps_start) << "\n";
    out << "eps_final = " << fmt(c.eps_final) << "\n";
    out << "eps_decay_frac = " << fmt(c.eps_decay_frac) << "\n";
    out << "lambda_adv = " << fmt(c.lambda_adv) << "\n";
    out << "episode_length = " << c.episode_length << "\n";
    out << "warmup_steps = " << c.warmup_steps << "\n";
    out << "actor_lr = " << fmt(c.actor_lr) << "\n";
    out << "critic_lr = " << fmt(c.critic_lr) << "\n";
    out << "checkpoint_period = " << c.checkpoint_period << "\n";
    out << "repulse_gain = " << fmt(c.repulse_gain) << "\n";
    out << "repulse_radius = " << fmt(c.repulse_radius) << "\n";
    out << "spacing_gain = " << fmt(c.spacing_gain) << "\n";
    out << "spacing_scale = " << fmt(c.spacing_scale) << "\n";
    out << "cruise_altitude = " << fmt(c.cruise_altitude) << "\n";
    out << "smoothing_window = " << c.smoothing_window << "\n";
    return out.str();
}

}  // namespace relaysim
