#include "relaysim/replay.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace relaysim {

SumTree::SumTree(int capacity) : capacity_(capacity) {
    if (capacity <= 0) throw std::invalid_argument("sum tree capacity must be positive");
    while (leaves_ < capacity) leaves_ *= 2;
    nodes_.assign(static_cast<size_t>(2) * leaves_, 0.0);
}

void SumTree::set(int index, double value) {
    if (index < 0 || index >= capacity_) throw std::out_of_range("sum tree index");
    if (!(value >= 0.0)) throw std::invalid_argument("sum tree values must be nonnegative");
    int node = leaves_ + index;
    nodes_[node] = value;
    for (node /= 2; node >= 1; node /= 2)
        nodes_[node] = nodes_[2 * node] + nodes_[2 * node + 1];
}

double SumTree::get(int index) const {
    if (index < 0 || index >= capacity_) throw std::out_of_range("sum tree index");
    return nodes_[leaves_ + index];
}

int SumTree::find_prefix(double prefix) const {
    if (total() <= 0.0) throw std::logic_error("sum tree is empty");
    prefix = std::clamp(prefix, 0.0, total());
    int node = 1;
    while (node < leaves_) {
        const double left = nodes_[2 * node];
        if (prefix < left) {
            node = 2 * node;
        } else {
            prefix -= left;
            node = 2 * node + 1;
        }
    }
    int index = node - leaves_;
    // The clamp above can land exactly past the last positive leaf.
    if (index >= capacity_) index = capacity_ - 1;
    while (index > 0 && nodes_[leaves_ + index] <= 0.0) --index;
    return index;
}

PriorityBuffer::PriorityBuffer(int capacity, double alpha, double beta, double eps)
    : capacity_(capacity), alpha_(alpha), beta_(beta), eps_(eps), tree_(capacity) {
    if (capacity <= 0) throw std::invalid_argument("replay capacity must be positive");
    if (alpha < 0.0 || beta < 0.0 || eps <= 0.0)
        throw std::invalid_argument("replay hyperparameters out of range");
    items_.resize(capacity);
    raw_.assign(capacity, 0.0);
}

void PriorityBuffer::push(Transition t) {
    const int idx = next_;
    items_[idx] = std::move(t);
    raw_[idx] = max_raw_;
    tree_.set(idx, std::pow(max_raw_, alpha_));
    next_ = (next_ + 1) % capacity_;
    size_ = std::min(size_ + 1, capacity_);
}

SampleBatch PriorityBuffer::sample(int batch_size, Rng& rng) {
    if (batch_size <= 0) throw std::invalid_argument("batch size must be positive");
    if (batch_size > size_) throw std::logic_error("replay buffer has fewer items than batch");
    SampleBatch batch;
    batch.indices.resize(batch_size);
    batch.weights.resize(batch_size);
    const double total = tree_.total();
    const double segment = total / batch_size;
    double max_w = 0.0;
    for (int k = 0; k < batch_size; ++k) {
        const double u = segment * (k + rng.uniform());
        const int idx = tree_.find_prefix(u);
        batch.indices[k] = idx;
        const double p = tree_.get(idx) / total;
        const double w = std::pow(static_cast<double>(size_) * p, -beta_);
        batch.weights[k] = w;
        max_w = std::max(max_w, w);
    }
    if (max_w > 0.0)
        for (double& w : batch.weights) w /= max_w;
    return batch;
}

void PriorityBuffer::update_priorities(const std::vector<int>& indices,
                                       const std::vector<double>& td_errors) {
    if (indices.size() != td_errors.size())
        throw std::invalid_argument("update_priorities: size mismatch");
    for (size_t k = 0; k < indices.size(); ++k) {
        const int idx = indices[k];
        if (idx < 0 || idx >= size_) throw std::out_of_range("update_priorities index");
        const double raw = std::abs(td_errors[k]) + eps_;
        raw_[idx] = raw;
        tree_.set(idx, std::pow(raw, alpha_));
        max_raw_ = std::max(max_raw_, raw);
    }
}

}  // namespace relaysim
