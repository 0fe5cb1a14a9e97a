#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "relaysim/action.hpp"
#include "relaysim/channel.hpp"
#include "relaysim/config.hpp"
#include "relaysim/dynamics.hpp"
#include "relaysim/harness.hpp"
#include "relaysim/metrics.hpp"
#include "relaysim/observe.hpp"
#include "relaysim/rewards.hpp"
#include "relaysim/trainer.hpp"
#include "relaysim/world.hpp"

namespace py = pybind11;
using namespace relaysim;

namespace {

py::tuple vec_to_tuple(const Vec3& v) { return py::make_tuple(v.x, v.y, v.z); }

py::dict metrics_to_dict(const EpisodeMetrics& r) {
    py::dict d;
    d["episode"] = r.episode;
    d["mean_global_reward"] = r.mean_global_reward;
    d["smoothed_reward"] = r.smoothed_reward;
    d["throughput_norm"] = r.throughput_norm;
    d["throughput_bps"] = r.throughput_bps;
    d["collision_penalty"] = r.collision_penalty;
    d["mean_jammer_distance"] = r.mean_jammer_distance;
    d["mean_individual_reward"] = r.mean_individual_reward;
    d["epsilon"] = r.epsilon;
    d["w_thr"] = r.weights.thr;
    d["w_coop"] = r.weights.coop;
    d["w_col"] = r.weights.col;
    d["w_fly"] = r.weights.fly;
    return d;
}

// World + generator bundle for stepping episodes from Python.
struct PyEnv {
    RunConfig cfg;
    Rng rng;
    World world;

    PyEnv(const RunConfig& config, uint64_t seed) : cfg(config), rng(seed), world{} {
        cfg.validate();
        world = make_world(cfg, rng);
    }

    void reset() { world = make_world(cfg, rng); }

    std::vector<bool> mask(int agent) const {
        const ActionMask m = safety_mask(world, agent, cfg);
        return std::vector<bool>(m.begin(), m.end());
    }

    std::vector<double> obs(int agent) const { return observe(world, agent, cfg); }
    std::vector<double> state() const { return global_state(world, cfg); }

    std::vector<py::tuple> uav_positions() const {
        std::vector<py::tuple> out;
        for (const UavState& u : world.uavs) out.push_back(vec_to_tuple(u.pos));
        return out;
    }

    py::dict step(const std::vector<int>& action_indices) {
        if (static_cast<int>(action_indices.size()) != cfg.n_uavs)
            throw std::invalid_argument("need one action index per UAV");
        std::vector<Action> actions;
        actions.reserve(action_indices.size());
        for (int idx : action_indices) actions.push_back(decode_action(idx));
        world = apply_actions(world, actions, cfg);
        world = step_gcvs(world, rng, cfg);
        const std::vector<int> assignment = assign_gcvs(world);
        const std::vector<double> rates = pair_rates(world, cfg, assignment);
        const RewardWeights w{cfg.w_thr, cfg.w_coop, cfg.w_col, cfg.w_fly};
        const IndividualCoeffs c{cfg.alpha_thr, cfg.alpha_assign, cfg.alpha_col};
        const RewardBreakdown rb = step_rewards(world, actions, assignment, rates, w, c, cfg);
        py::dict out;
        out["global_reward"] = rb.global_r;
        out["individual_rewards"] = rb.individual_r;
        out["throughput_norm"] = rb.throughput_norm;
        out["throughput_bps"] = rb.throughput_bps;
        out["collision_penalty"] = rb.p_col;
        out["cooperation_bonus"] = rb.coop_bonus;
        out["assignment"] = assignment;
        out["pair_rates"] = rates;
        return out;
    }
};

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Jammed multi-UAV relay simulator with a CTDE training stack";

    py::register_exception<ConfigError>(m, "ConfigError");

    py::class_<RunConfig>(m, "RunConfig")
        .def(py::init<>())
        .def_readwrite("area_side", &RunConfig::area_side)
        .def_readwrite("h_min", &RunConfig::h_min)
        .def_readwrite("h_max", &RunConfig::h_max)
        .def_readwrite("n_uavs", &RunConfig::n_uavs)
        .def_readwrite("n_pairs", &RunConfig::n_pairs)
        .def_readwrite("jammer_power", &RunConfig::jammer_power)
        .def_readwrite("bandwidth_hz", &RunConfig::bandwidth_hz)
        .def_readwrite("noise_power", &RunConfig::noise_power)
        .def_readwrite("k_nearest", &RunConfig::k_nearest)
        .def_readwrite("d_safe", &RunConfig::d_safe)
        .def_readwrite("total_steps", &RunConfig::total_steps)
        .def_readwrite("episode_length", &RunConfig::episode_length)
        .def_readwrite("batch_size", &RunConfig::batch_size)
        .def_readwrite("warmup_steps", &RunConfig::warmup_steps)
        .def_readwrite("buffer_capacity", &RunConfig::buffer_capacity)
        .def_readwrite("gamma", &RunConfig::gamma)
        .def_readwrite("checkpoint_period", &RunConfig::checkpoint_period)
        .def_property_readonly("obs_dim", &RunConfig::obs_dim)
        .def_property_readonly("state_dim", &RunConfig::state_dim)
        .def("set", &apply_config_entry, py::arg("key"), py::arg("value"),
             "Set any config key from its text form")
        .def("text", &config_to_text, "Serialize every key (load_config format)")
        .def("validate", &RunConfig::validate);

    m.def("load_config", &load_config, py::arg("path"));
    m.def("num_actions", [] { return kNumActions; });
    m.def("decode_action", [](int idx) {
        const Action a = decode_action(idx);
        return py::make_tuple(static_cast<int>(a.move), a.power_index);
    });
    m.def("encode_action", [](int move, int power_index) {
        return encode_action(Action{static_cast<Move>(move), power_index});
    });

    m.def("channel_gain", &channel_gain, py::arg("p_tx"), py::arg("p_rx"), py::arg("alpha"));
    m.def(
        "sinr",
        [](py::tuple tx, double power, py::tuple rx, double noise, double i_co, double i_jam,
           double alpha) {
            const Vec3 ptx{tx[0].cast<double>(), tx[1].cast<double>(), tx[2].cast<double>()};
            const Vec3 prx{rx[0].cast<double>(), rx[1].cast<double>(), rx[2].cast<double>()};
            return sinr(ptx, power, prx, noise, i_co, i_jam, alpha);
        },
        py::arg("tx"), py::arg("power"), py::arg("rx"), py::arg("noise"), py::arg("i_co") = 0.0,
        py::arg("i_jam") = 0.0, py::arg("alpha") = 2.0);
    m.def("link_rate", &link_rate, py::arg("sinr"), py::arg("bandwidth_hz"));

    py::class_<Vec3>(m, "Vec3")
        .def(py::init<>())
        .def(py::init([](double x, double y, double z) { return Vec3{x, y, z}; }))
        .def_readwrite("x", &Vec3::x)
        .def_readwrite("y", &Vec3::y)
        .def_readwrite("z", &Vec3::z);

    py::class_<PyEnv>(m, "Env")
        .def(py::init<const RunConfig&, uint64_t>(), py::arg("config"), py::arg("seed"))
        .def("reset", &PyEnv::reset)
        .def("mask", &PyEnv::mask, py::arg("agent"))
        .def("obs", &PyEnv::obs, py::arg("agent"))
        .def("state", &PyEnv::state)
        .def("uav_positions", &PyEnv::uav_positions)
        .def("step", &PyEnv::step, py::arg("action_indices"));

    m.def(
        "train",
        [](const RunConfig& cfg, uint64_t seed, const std::string& out_dir) {
            std::vector<EpisodeMetrics> rows;
            {
                py::gil_scoped_release release;
                train(cfg, seed, out_dir, &rows);
            }
            py::list out;
            for (const EpisodeMetrics& r : rows) out.append(metrics_to_dict(r));
            return out;
        },
        py::arg("config"), py::arg("seed") = 0, py::arg("out_dir") = std::string());

    m.def(
        "run_eval",
        [](const RunConfig& cfg, const std::string& policy, const std::string& checkpoint,
           int episodes, uint64_t seed) {
            std::vector<EpisodeMetrics> rows;
            {
                py::gil_scoped_release release;
                rows = run_eval(cfg, policy, checkpoint, episodes, seed);
            }
            py::list out;
            for (const EpisodeMetrics& r : rows) out.append(metrics_to_dict(r));
            return out;
        },
        py::arg("config"), py::arg("policy"), py::arg("checkpoint") = std::string(),
        py::arg("episodes") = 10, py::arg("seed") = 0);
}
