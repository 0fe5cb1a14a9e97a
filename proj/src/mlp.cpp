#include "relaysim/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace relaysim {

namespace {

double dot(const double* a, const double* b, int n) {
    double s = 0.0;
#pragma omp simd reduction(+ : s)
    for (int i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy(double a, const double* x, double* y, int n) {
#pragma omp simd
    for (int i = 0; i < n; ++i) y[i] += a * x[i];
}

void relu_inplace(double* x, int n) {
    for (int i = 0; i < n; ++i) x[i] = x[i] > 0.0 ? x[i] : 0.0;
}

}  // namespace

MlpNet MlpNet::make(const std::vector<int>& layer_sizes, Rng& rng) {
    if (layer_sizes.size() < 2) throw std::invalid_argument("mlp needs at least two layer sizes");
    for (int s : layer_sizes)
        if (s <= 0) throw std::invalid_argument("mlp layer sizes must be positive");
    MlpNet net;
    net.sizes = layer_sizes;
    net.params.resize(net.param_count());
    for (int l = 0; l < net.num_layers(); ++l) {
        const int fan_in = net.sizes[l];
        const int fan_out = net.sizes[l + 1];
        const double limit = std::sqrt(6.0 / fan_in);
        double* w = net.params.data() + net.weight_offset(l);
        for (int i = 0; i < fan_out * fan_in; ++i) w[i] = rng.uniform(-limit, limit);
        double* b = net.params.data() + net.bias_offset(l);
        std::fill(b, b + fan_out, 0.0);
    }
    return net;
}

size_t MlpNet::param_count() const {
    size_t n = 0;
    for (size_t l = 0; l + 1 < sizes.size(); ++l)
        n += static_cast<size_t>(sizes[l + 1]) * sizes[l] + sizes[l + 1];
    return n;
}

size_t MlpNet::weight_offset(int layer) const {
    size_t off = 0;
    for (int l = 0; l < layer; ++l)
        off += static_cast<size_t>(sizes[l + 1]) * sizes[l] + sizes[l + 1];
    return off;
}

size_t MlpNet::bias_offset(int layer) const {
    return weight_offset(layer) + static_cast<size_t>(sizes[layer + 1]) * sizes[layer];
}

std::vector<double> mlp_forward(const MlpNet& net, std::span<const double> input) {
    if (static_cast<int>(input.size()) != net.input_dim())
        throw std::invalid_argument("mlp_forward: input size mismatch");
    std::vector<double> cur(input.begin(), input.end());
    std::vector<double> next;
    for (int l = 0; l < net.num_layers(); ++l) {
        const int in = net.sizes[l];
        const int out = net.sizes[l + 1];
        const double* w = net.params.data() + net.weight_offset(l);
        const double* b = net.params.data() + net.bias_offset(l);
        next.assign(out, 0.0);
        for (int o = 0; o < out; ++o) next[o] = b[o] + dot(cur.data(), w + static_cast<size_t>(o) * in, in);
        if (l + 1 < net.num_layers()) relu_inplace(next.data(), out);
        cur.swap(next);
    }
    return cur;
}

std::vector<double> mlp_backward(const MlpNet& net, std::span<const double> input,
                                 std::span<const double> output_grad,
                                 std::vector<double>* input_grad) {
    Matrix x(1, net.input_dim());
    std::copy(input.begin(), input.end(), x.data.begin());
    Matrix dy(1, net.output_dim());
    if (static_cast<int>(output_grad.size()) != net.output_dim())
        throw std::invalid_argument("mlp_backward: output_grad size mismatch");
    std::copy(output_grad.begin(), output_grad.end(), dy.data.begin());
    ForwardCache cache;
    mlp_forward_batch(net, x, cache);
    std::vector<double> grad(net.param_count(), 0.0);
    if (input_grad) {
        Matrix dx;
        mlp_backward_batch(net, cache, dy, grad, &dx);
        input_grad->assign(dx.data.begin(), dx.data.end());
    } else {
        mlp_backward_batch(net, cache, dy, grad, nullptr);
    }
    return grad;
}

const Matrix& mlp_forward_batch(const MlpNet& net, const Matrix& input, ForwardCache& cache) {
    if (input.cols != net.input_dim())
        throw std::invalid_argument("mlp_forward_batch: input width mismatch");
    const int layers = net.num_layers();
    cache.acts.resize(layers + 1);
    cache.acts[0] = input;
    for (int l = 0; l < layers; ++l) {
        const int in = net.sizes[l];
        const int out = net.sizes[l + 1];
        const Matrix& a = cache.acts[l];
        Matrix& z = cache.acts[l + 1];
        if (z.rows != input.rows || z.cols != out) z = Matrix(input.rows, out);
        const double* w = net.params.data() + net.weight_offset(l);
        const double* b = net.params.data() + net.bias_offset(l);
        // Outer blocking keeps a slab of weight rows hot in L1 while batch
        // rows stream past; the 4 batch rows x 2 output units register tile
        // gives eight independent accumulator chains and shares each weight
        // load across four rows.
        constexpr int kOutBlock = 16;
        for (int ob = 0; ob < out; ob += kOutBlock) {
            const int oe = std::min(ob + kOutBlock, out);
        int r = 0;
        for (; r + 3 < input.rows; r += 4) {
            const double* a0 = a.row(r);
            const double* a1 = a.row(r + 1);
            const double* a2 = a.row(r + 2);
            const double* a3 = a.row(r + 3);
            double* z0 = z.row(r);
            double* z1 = z.row(r + 1);
            double* z2 = z.row(r + 2);
            double* z3 = z.row(r + 3);
            int o = ob;
            for (; o + 1 < oe; o += 2) {
                const double* wr = w + static_cast<size_t>(o) * in;
                const double* ws = wr + in;
                double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
                double t0 = 0.0, t1 = 0.0, t2 = 0.0, t3 = 0.0;
#pragma omp simd reduction(+ : s0, s1, s2, s3, t0, t1, t2, t3)
                for (int i = 0; i < in; ++i) {
                    const double wi = wr[i];
                    const double vi = ws[i];
                    s0 += a0[i] * wi;
                    s1 += a1[i] * wi;
                    s2 += a2[i] * wi;
                    s3 += a3[i] * wi;
                    t0 += a0[i] * vi;
                    t1 += a1[i] * vi;
                    t2 += a2[i] * vi;
                    t3 += a3[i] * vi;
                }
                z0[o] = b[o] + s0;
                z1[o] = b[o] + s1;
                z2[o] = b[o] + s2;
                z3[o] = b[o] + s3;
                z0[o + 1] = b[o + 1] + t0;
                z1[o + 1] = b[o + 1] + t1;
                z2[o + 1] = b[o + 1] + t2;
                z3[o + 1] = b[o + 1] + t3;
            }
            for (; o < oe; ++o) {
                const double* wr = w + static_cast<size_t>(o) * in;
                double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
#pragma omp simd reduction(+ : s0, s1, s2, s3)
                for (int i = 0; i < in; ++i) {
                    const double wi = wr[i];
                    s0 += a0[i] * wi;
                    s1 += a1[i] * wi;
                    s2 += a2[i] * wi;
                    s3 += a3[i] * wi;
                }
                z0[o] = b[o] + s0;
                z1[o] = b[o] + s1;
                z2[o] = b[o] + s2;
                z3[o] = b[o] + s3;
            }
        }
        for (; r < input.rows; ++r) {
            const double* arow = a.row(r);
            double* zrow = z.row(r);
            for (int o = ob; o < oe; ++o)
                zrow[o] = b[o] + dot(arow, w + static_cast<size_t>(o) * in, in);
        }
        }
        if (l + 1 < layers) relu_inplace(z.data.data(), input.rows * out);
    }
    return cache.acts.back();
}

void mlp_backward_batch(const MlpNet& net, const ForwardCache& cache, const Matrix& output_grad,
                        std::vector<double>& grad, Matrix* input_grad) {
    const int layers = net.num_layers();
    if (static_cast<int>(cache.acts.size()) != layers + 1)
        throw std::invalid_argument("mlp_backward_batch: stale forward cache");
    if (grad.size() != net.param_count())
        throw std::invalid_argument("mlp_backward_batch: grad buffer size mismatch");
    const int batch = output_grad.rows;
    if (output_grad.cols != net.output_dim() || cache.acts[0].rows != batch)
        throw std::invalid_argument("mlp_backward_batch: output_grad shape mismatch");

    Matrix delta = output_grad;
    Matrix down;
    for (int l = layers - 1; l >= 0; --l) {
        const int in = net.sizes[l];
        const int out = net.sizes[l + 1];
        const Matrix& a = cache.acts[l];
        double* dw = grad.data() + net.weight_offset(l);
        double* db = grad.data() + net.bias_offset(l);
        // dW row o accumulates four batch rows per pass; all-zero delta
        // groups (common for gather-style output gradients) are skipped.
        for (int o = 0; o < out; ++o) {
            double* dwrow = dw + static_cast<size_t>(o) * in;
            double bsum = 0.0;
            int r = 0;
            for (; r + 7 < batch; r += 8) {
                const double c0 = delta.at(r, o);
                const double c1 = delta.at(r + 1, o);
                const double c2 = delta.at(r + 2, o);
                const double c3 = delta.at(r + 3, o);
                const double c4 = delta.at(r + 4, o);
                const double c5 = delta.at(r + 5, o);
                const double c6 = delta.at(r + 6, o);
                const double c7 = delta.at(r + 7, o);
                bsum += c0 + c1 + c2 + c3 + c4 + c5 + c6 + c7;
                if (c0 == 0.0 && c1 == 0.0 && c2 == 0.0 && c3 == 0.0 && c4 == 0.0 && c5 == 0.0 &&
                    c6 == 0.0 && c7 == 0.0)
                    continue;
                const double* a0 = a.row(r);
                const double* a1 = a.row(r + 1);
                const double* a2 = a.row(r + 2);
                const double* a3 = a.row(r + 3);
                const double* a4 = a.row(r + 4);
                const double* a5 = a.row(r + 5);
                const double* a6 = a.row(r + 6);
                const double* a7 = a.row(r + 7);
#pragma omp simd
                for (int i = 0; i < in; ++i)
                    dwrow[i] += c0 * a0[i] + c1 * a1[i] + c2 * a2[i] + c3 * a3[i] + c4 * a4[i] +
                                c5 * a5[i] + c6 * a6[i] + c7 * a7[i];
            }
            for (; r < batch; ++r) {
                const double d = delta.at(r, o);
                bsum += d;
                if (d != 0.0) axpy(d, a.row(r), dwrow, in);
            }
            db[o] += bsum;
        }
        const bool need_down = l > 0 || input_grad != nullptr;
        if (!need_down) break;
        if (down.rows != batch || down.cols != in) down = Matrix(batch, in);
        down.zero();
        const double* w = net.params.data() + net.weight_offset(l);
        constexpr int kOutBlock = 16;
        for (int ob = 0; ob < out; ob += kOutBlock) {
            const int oe = std::min(ob + kOutBlock, out);
        int r = 0;
        for (; r + 3 < batch; r += 4) {
            double* d0 = down.row(r);
            double* d1 = down.row(r + 1);
            double* d2 = down.row(r + 2);
            double* d3 = down.row(r + 3);
            const double* g0 = delta.row(r);
            const double* g1 = delta.row(r + 1);
            const double* g2 = delta.row(r + 2);
            const double* g3 = delta.row(r + 3);
            int o = ob;
            for (; o + 1 < oe; o += 2) {
                const double c0 = g0[o], c1 = g1[o], c2 = g2[o], c3 = g3[o];
                const double e0 = g0[o + 1], e1 = g1[o + 1], e2 = g2[o + 1], e3 = g3[o + 1];
                const bool first = c0 != 0.0 || c1 != 0.0 || c2 != 0.0 || c3 != 0.0;
                const bool second = e0 != 0.0 || e1 != 0.0 || e2 != 0.0 || e3 != 0.0;
                const double* wr = w + static_cast<size_t>(o) * in;
                const double* ws = wr + in;
                if (first && second) {
#pragma omp simd
                    for (int i = 0; i < in; ++i) {
                        const double wi = wr[i];
                        const double vi = ws[i];
                        d0[i] += c0 * wi + e0 * vi;
                        d1[i] += c1 * wi + e1 * vi;
                        d2[i] += c2 * wi + e2 * vi;
                        d3[i] += c3 * wi + e3 * vi;
                    }
                } else if (first) {
#pragma omp simd
                    for (int i = 0; i < in; ++i) {
                        const double wi = wr[i];
                        d0[i] += c0 * wi;
                        d1[i] += c1 * wi;
                        d2[i] += c2 * wi;
                        d3[i] += c3 * wi;
                    }
                } else if (second) {
#pragma omp simd
                    for (int i = 0; i < in; ++i) {
                        const double vi = ws[i];
                        d0[i] += e0 * vi;
                        d1[i] += e1 * vi;
                        d2[i] += e2 * vi;
                        d3[i] += e3 * vi;
                    }
                }
            }
            for (; o < oe; ++o) {
                const double c0 = g0[o], c1 = g1[o], c2 = g2[o], c3 = g3[o];
                if (c0 == 0.0 && c1 == 0.0 && c2 == 0.0 && c3 == 0.0) continue;
                const double* wr = w + static_cast<size_t>(o) * in;
#pragma omp simd
                for (int i = 0; i < in; ++i) {
                    const double wi = wr[i];
                    d0[i] += c0 * wi;
                    d1[i] += c1 * wi;
                    d2[i] += c2 * wi;
                    d3[i] += c3 * wi;
                }
            }
        }
        for (; r < batch; ++r) {
            double* drow = down.row(r);
            const double* dl = delta.row(r);
            for (int o = ob; o < oe; ++o)
                if (dl[o] != 0.0) axpy(dl[o], w + static_cast<size_t>(o) * in, drow, in);
        }
        }
        if (l > 0) {
            // acts[l] holds post-ReLU values, so the mask is activation > 0.
            const double* ap = a.data.data();
            double* dp = down.data.data();
            const size_t n = a.data.size();
            for (size_t i = 0; i < n; ++i)
                if (ap[i] <= 0.0) dp[i] = 0.0;
        }
        delta.data.swap(down.data);
        std::swap(delta.rows, down.rows);
        std::swap(delta.cols, down.cols);
    }
    if (input_grad) *input_grad = delta;
}

AdamState AdamState::make(size_t param_count, double lr, double beta1, double beta2, double eps) {
    AdamState s;
    s.lr = lr;
    s.beta1 = beta1;
    s.beta2 = beta2;
    s.eps = eps;
    s.m.assign(param_count, 0.0);
    s.v.assign(param_count, 0.0);
    return s;
}

void adam_step(std::vector<double>& params, const std::vector<double>& grads, AdamState& state) {
    if (params.size() != grads.size() || params.size() != state.m.size())
        throw std::invalid_argument("adam_step: size mismatch");
    state.t += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
    const size_t n = params.size();
    double* p = params.data();
    double* m = state.m.data();
    double* v = state.v.data();
    const double* g = grads.data();
    const double b1 = state.beta1, b2 = state.beta2, lr = state.lr, eps = state.eps;
#pragma omp simd
    for (size_t i = 0; i < n; ++i) {
        m[i] = b1 * m[i] + (1.0 - b1) * g[i];
        v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
        const double mhat = m[i] / bc1;
        const double vhat = v[i] / bc2;
        p[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

std::pair<double, double> huber(double residual, double delta) {
    const double a = std::abs(residual);
    if (a <= delta) return {0.5 * residual * residual, residual};
    const double sign = residual > 0.0 ? 1.0 : -1.0;
    return {delta * (a - 0.5 * delta), delta * sign};
}

double clip_gradient(std::vector<double>& g, double max_norm) {
    double sq = 0.0;
    const size_t n = g.size();
    const double* gp = g.data();
#pragma omp simd reduction(+ : sq)
    for (size_t i = 0; i < n; ++i) sq += gp[i] * gp[i];
    const double norm = std::sqrt(sq);
    if (norm > max_norm && norm > 0.0) {
        const double scale = max_norm / norm;
        double* gm = g.data();
#pragma omp simd
        for (size_t i = 0; i < n; ++i) gm[i] *= scale;
    }
    return norm;
}

void polyak_update(std::span<const double> online, std::span<double> target, double tau) {
    if (online.size() != target.size())
        throw std::invalid_argument("polyak_update: size mismatch");
    const size_t n = target.size();
    const double* o = online.data();
    double* t = target.data();
#pragma omp simd
    for (size_t i = 0; i < n; ++i) t[i] = tau * o[i] + (1.0 - tau) * t[i];
}

void Normalizer::observe(std::span<const double> x) {
    if (static_cast<int>(x.size()) != dim())
        throw std::invalid_argument("normalizer: dimension mismatch");
    count_ += 1;
    for (int i = 0; i < dim(); ++i) {
        const double d = x[i] - mean_[i];
        mean_[i] += d / count_;
        m2_[i] += d * (x[i] - mean_[i]);
    }
}

void Normalizer::apply_to(std::span<const double> x, std::span<double> out) const {
    if (static_cast<int>(x.size()) != dim() || out.size() != x.size())
        throw std::invalid_argument("normalizer: dimension mismatch");
    if (count_ == 0) {
        std::copy(x.begin(), x.end(), out.begin());
        return;
    }
    for (int i = 0; i < dim(); ++i) {
        const double sd = std::sqrt(m2_[i] / count_ + kEps);
        out[i] = std::clamp((x[i] - mean_[i]) / sd, -kClip, kClip);
    }
}

std::vector<double> Normalizer::apply(std::span<const double> x) const {
    std::vector<double> out(x.size());
    apply_to(x, out);
    return out;
}

void Normalizer::restore(long long count, std::vector<double> mean, std::vector<double> m2) {
    if (mean.size() != mean_.size() || m2.size() != m2_.size())
        throw std::invalid_argument("normalizer: restore dimension mismatch");
    count_ = count;
    mean_ = std::move(mean);
    m2_ = std::move(m2);
}

}  // namespace relaysim
