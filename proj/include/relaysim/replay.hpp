#pragma once

#include <cstdint>
#include <vector>

#include "relaysim/rng.hpp"

namespace relaysim {

// One multi-agent step: global critic state, per-agent observations and
// composite action indices, the shared reward, per-agent rewards, successors.
struct Transition {
    std::vector<double> state;
    std::vector<double> obs;       // n_agents * obs_dim, agent-major
    std::vector<int> actions;      // composite action index per agent
    double global_reward = 0.0;
    std::vector<double> individual_rewards;
    std::vector<double> state_next;
    std::vector<double> obs_next;
    bool done = false;
};

// Binary indexed sum tree over a power-of-two leaf array. Leaves store
// nonnegative mass; internal nodes store subtree sums.
class SumTree {
public:
    explicit SumTree(int capacity);

    void set(int index, double value);
    double get(int index) const;
    double total() const { return nodes_[1]; }
    // Index of the first leaf whose cumulative mass exceeds prefix.
    int find_prefix(double prefix) const;
    int capacity() const { return capacity_; }

private:
    int capacity_ = 0;
    int leaves_ = 1;
    std::vector<double> nodes_;
};

struct SampleBatch {
    std::vector<int> indices;
    std::vector<double> weights;  // importance-sampling weights, max-normalized
};

// Ring buffer with proportional prioritized sampling. Raw priorities are
// |td| + eps; the tree stores raw^alpha. New entries enter at the largest
// raw priority seen so far so they are replayed at least once.
class PriorityBuffer {
public:
    PriorityBuffer(int capacity, double alpha, double beta, double eps);

    void push(Transition t);
    SampleBatch sample(int batch_size, Rng& rng);
    void update_priorities(const std::vector<int>& indices, const std::vector<double>& td_errors);
    void set_beta(double beta) { beta_ = beta; }

    int size() const { return size_; }
    int capacity() const { return capacity_; }
    double beta() const { return beta_; }
    const Transition& at(int index) const { return items_[index]; }
    double raw_priority(int index) const { return raw_[index]; }
    double tree_total() const { return tree_.total(); }

private:
    int capacity_ = 0;
    double alpha_ = 0.6;
    double beta_ = 0.4;
    double eps_ = 1e-3;
    int size_ = 0;
    int next_ = 0;
    double max_raw_ = 1.0;
    std::vector<Transition> items_;
    std::vector<double> raw_;
    SumTree tree_;
};

}  // namespace relaysim
