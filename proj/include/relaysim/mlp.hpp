#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "relaysim/rng.hpp"

namespace relaysim {

// Row-major dense matrix, the only tensor shape the stack needs.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

    double* row(int i) { return data.data() + static_cast<size_t>(i) * cols; }
    const double* row(int i) const { return data.data() + static_cast<size_t>(i) * cols; }
    double& at(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
    double at(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }
    void zero() { std::fill(data.begin(), data.end(), 0.0); }
};

// Fully connected net, ReLU on hidden layers, linear output. Parameters live
// in one flat buffer (per layer: weights [out x in] row-major, then biases),
// which keeps the optimizer, soft updates, and checkpointing trivial.
struct MlpNet {
    std::vector<int> sizes;
    std::vector<double> params;

    // He-uniform fan-in initialization, biases zero.
    static MlpNet make(const std::vector<int>& layer_sizes, Rng& rng);

    int num_layers() const { return static_cast<int>(sizes.size()) - 1; }
    int input_dim() const { return sizes.front(); }
    int output_dim() const { return sizes.back(); }
    size_t param_count() const;
    size_t weight_offset(int layer) const;
    size_t bias_offset(int layer) const;
};

std::vector<double> mlp_forward(const MlpNet& net, std::span<const double> input);

// Gradients of sum(output * output_grad) w.r.t. all parameters, laid out like
// net.params. Optionally also fills the gradient w.r.t. the input.
std::vector<double> mlp_backward(const MlpNet& net, std::span<const double> input,
                                 std::span<const double> output_grad,
                                 std::vector<double>* input_grad = nullptr);

// Batched pass with cached activations for the training loop. acts[0] is the
// input; acts[l+1] is layer l's post-activation output.
struct ForwardCache {
    std::vector<Matrix> acts;
};

const Matrix& mlp_forward_batch(const MlpNet& net, const Matrix& input, ForwardCache& cache);

// Accumulates parameter gradients into grad (must be zeroed by the caller if
// fresh gradients are wanted); optionally yields input gradients.
void mlp_backward_batch(const MlpNet& net, const ForwardCache& cache, const Matrix& output_grad,
                        std::vector<double>& grad, Matrix* input_grad = nullptr);

struct AdamState {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    long long t = 0;
    std::vector<double> m;
    std::vector<double> v;

    static AdamState make(size_t param_count, double lr, double beta1, double beta2, double eps);
};

void adam_step(std::vector<double>& params, const std::vector<double>& grads, AdamState& state);

// (loss, dloss/dresidual): quadratic inside |r| <= delta, linear outside.
std::pair<double, double> huber(double residual, double delta);

// Scales g to L2 norm max_norm when it exceeds it; returns the original norm.
double clip_gradient(std::vector<double>& g, double max_norm);

// target <- tau * online + (1 - tau) * target, elementwise.
void polyak_update(std::span<const double> online, std::span<double> target, double tau);

// Welford running statistics with standardize-and-clip application. Before
// any observation it applies the identity (mean 0, variance 1).
class Normalizer {
public:
    Normalizer() = default;
    explicit Normalizer(int dim) : mean_(dim, 0.0), m2_(dim, 0.0) {}

    void observe(std::span<const double> x);
    std::vector<double> apply(std::span<const double> x) const;
    void apply_to(std::span<const double> x, std::span<double> out) const;

    int dim() const { return static_cast<int>(mean_.size()); }
    long long count() const { return count_; }
    double mean(int i) const { return mean_[i]; }
    // Population variance.
    double variance(int i) const { return count_ > 0 ? m2_[i] / count_ : 1.0; }

    static constexpr double kEps = 1e-8;
    static constexpr double kClip = 10.0;

    // Checkpoint access.
    const std::vector<double>& raw_mean() const { return mean_; }
    const std::vector<double>& raw_m2() const { return m2_; }
    void restore(long long count, std::vector<double> mean, std::vector<double> m2);

private:
    long long count_ = 0;
    std::vector<double> mean_;
    std::vector<double> m2_;
};

}  // namespace relaysim
