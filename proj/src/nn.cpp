#include "lffrl/nn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace lffrl {

const char* activation_name(Activation a) {
    switch (a) {
        case Activation::Identity: return "identity";
        case Activation::ReLU: return "relu";
        case Activation::Sin: return "sin";
        case Activation::Cos: return "cos";
    }
    return "?";
}

std::size_t Mlp::layer_output_dim(std::size_t l) const {
    const LinearLayer& layer = layers[l];
    if (l == 0 && clff_first) return 2 * layer.out_dim() + layer.in_dim();
    return layer.out_dim();
}

std::size_t Mlp::output_dim() const { return layer_output_dim(layers.size() - 1); }

std::size_t Mlp::parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.weights.size() + l.biases.size();
    return n;
}

LinearLayer make_layer(std::size_t out, std::size_t in, Activation act, bool use_bias) {
    LinearLayer l;
    l.weights = Matrix(out, in);
    if (use_bias) l.biases.assign(out, 0.0);
    l.activation = act;
    l.use_bias = use_bias;
    return l;
}

namespace {

Matrix affine(const LinearLayer& layer, const Matrix& x) {
    Matrix z = matmul_nt(x, layer.weights);
    if (layer.use_bias) {
        for (std::size_t i = 0; i < z.rows; ++i)
            for (std::size_t j = 0; j < z.cols; ++j) z(i, j) += layer.biases[j];
    }
    return z;
}

// Range checks run on every forward pass: sin/cos stay in [-1,1], relu >= 0.
void apply_activation(Activation act, const Matrix& z, Matrix& out) {
    out = z;
    switch (act) {
        case Activation::Identity:
            break;
        case Activation::ReLU:
            for (double& v : out.data) v = v > 0.0 ? v : 0.0;
            for (double v : out.data)
                if (!(v >= 0.0)) throw std::logic_error("forward: relu output < 0");
            break;
        case Activation::Sin:
            for (double& v : out.data) v = std::sin(v);
            for (double v : out.data)
                if (!(v >= -1.0 && v <= 1.0)) throw std::logic_error("forward: sin out of [-1,1]");
            break;
        case Activation::Cos:
            for (double& v : out.data) v = std::cos(v);
            for (double v : out.data)
                if (!(v >= -1.0 && v <= 1.0)) throw std::logic_error("forward: cos out of [-1,1]");
            break;
    }
}

double activation_derivative(Activation act, double z) {
    switch (act) {
        case Activation::Identity: return 1.0;
        case Activation::ReLU: return z > 0.0 ? 1.0 : 0.0;
        case Activation::Sin: return std::cos(z);
        case Activation::Cos: return -std::sin(z);
    }
    return 0.0;
}

}  // namespace

ForwardCache forward(const Mlp& net, const Matrix& batch) {
    check(!net.layers.empty(), "forward: empty network");
    check(batch.cols == net.input_dim(), "forward: batch.cols != net input dim");

    ForwardCache cache;
    cache.input = batch;
    cache.pre.reserve(net.layers.size());
    cache.post.reserve(net.layers.size());

    const Matrix* x = &cache.input;
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        const LinearLayer& layer = net.layers[l];
        check(x->cols == layer.in_dim(), "forward: layer input dim mismatch");
        Matrix z = affine(layer, *x);

        Matrix a;
        if (l == 0 && net.clff_first) {
            const std::size_t k = layer.out_dim(), d = layer.in_dim();
            a = Matrix(z.rows, 2 * k + d);
            for (std::size_t i = 0; i < z.rows; ++i) {
                for (std::size_t j = 0; j < k; ++j) {
                    a(i, j) = std::sin(z(i, j));
                    a(i, k + j) = std::cos(z(i, j));
                }
                for (std::size_t j = 0; j < d; ++j) a(i, 2 * k + j) = (*x)(i, j);
            }
        } else {
            apply_activation(layer.activation, z, a);
        }
        cache.pre.push_back(std::move(z));
        cache.post.push_back(std::move(a));
        x = &cache.post.back();
    }
    return cache;
}

Gradients zero_gradients(const Mlp& net) {
    Gradients g;
    g.layers.reserve(net.layers.size());
    for (const auto& l : net.layers) {
        LayerGrads lg;
        lg.d_weights = Matrix(l.weights.rows, l.weights.cols);
        lg.d_biases.assign(l.biases.size(), 0.0);
        g.layers.push_back(std::move(lg));
    }
    return g;
}

void accumulate(Gradients& into, const Gradients& from, double scale) {
    for (std::size_t l = 0; l < into.layers.size(); ++l) {
        auto& a = into.layers[l];
        const auto& b = from.layers[l];
        for (std::size_t i = 0; i < a.d_weights.size(); ++i)
            a.d_weights.data[i] += scale * b.d_weights.data[i];
        for (std::size_t i = 0; i < a.d_biases.size(); ++i)
            a.d_biases[i] += scale * b.d_biases[i];
    }
}

Gradients backward(const Mlp& net, const ForwardCache& cache, const Matrix& output_grad) {
    check(cache.post.size() == net.layers.size(), "backward: stale forward cache");
    check(output_grad.rows == cache.output().rows && output_grad.cols == cache.output().cols,
          "backward: output_grad shape mismatch");

    Gradients grads = zero_gradients(net);
    Matrix delta = output_grad;  // gradient w.r.t. current layer's post-activation

    for (std::size_t li = net.layers.size(); li-- > 0;) {
        const LinearLayer& layer = net.layers[li];
        const Matrix& z = cache.pre[li];
        const Matrix& x = li == 0 ? cache.input : cache.post[li - 1];

        Matrix dz;
        Matrix dx_extra;  // CLFF passes part of the gradient straight to x
        if (li == 0 && net.clff_first) {
            const std::size_t k = layer.out_dim(), d = layer.in_dim();
            dz = Matrix(z.rows, k);
            dx_extra = Matrix(z.rows, d);
            for (std::size_t i = 0; i < z.rows; ++i) {
                for (std::size_t j = 0; j < k; ++j) {
                    double zj = z(i, j);
                    dz(i, j) = delta(i, j) * std::cos(zj) - delta(i, k + j) * std::sin(zj);
                }
                for (std::size_t j = 0; j < d; ++j) dx_extra(i, j) = delta(i, 2 * k + j);
            }
        } else {
            dz = Matrix(z.rows, z.cols);
            for (std::size_t i = 0; i < z.rows; ++i)
                for (std::size_t j = 0; j < z.cols; ++j)
                    dz(i, j) = delta(i, j) * activation_derivative(layer.activation, z(i, j));
        }

        grads.layers[li].d_weights = matmul_tn(dz, x);
        if (layer.use_bias) {
            for (std::size_t j = 0; j < dz.cols; ++j) {
                double s = 0.0;
                for (std::size_t i = 0; i < dz.rows; ++i) s += dz(i, j);
                grads.layers[li].d_biases[j] = s;
            }
        }

        Matrix dx = matmul(dz, layer.weights);
        if (!dx_extra.empty())
            for (std::size_t i = 0; i < dx.size(); ++i) dx.data[i] += dx_extra.data[i];
        delta = std::move(dx);
    }
    grads.d_input = std::move(delta);
    return grads;
}

AdamState make_adam(const Mlp& net, double lr) {
    AdamState s;
    s.lr = lr;
    s.slots.reserve(net.layers.size() * 2);
    for (const auto& l : net.layers) {
        AdamState::Slot w;
        w.m.assign(l.weights.size(), 0.0);
        w.v.assign(l.weights.size(), 0.0);
        s.slots.push_back(std::move(w));
        AdamState::Slot b;
        b.m.assign(l.biases.size(), 0.0);
        b.v.assign(l.biases.size(), 0.0);
        s.slots.push_back(std::move(b));
    }
    return s;
}

namespace {

void adam_update_span(std::span<double> param, std::span<const double> grad,
                      AdamState::Slot& slot, const AdamState& s,
                      double bias1, double bias2, double decay) {
    for (std::size_t i = 0; i < param.size(); ++i) {
        double g = grad[i];
        if (decay != 0.0) g += decay * param[i];
        slot.m[i] = s.beta1 * slot.m[i] + (1.0 - s.beta1) * g;
        slot.v[i] = s.beta2 * slot.v[i] + (1.0 - s.beta2) * g * g;
        double mhat = slot.m[i] / bias1;
        double vhat = slot.v[i] / bias2;
        param[i] -= s.lr * mhat / (std::sqrt(vhat) + s.eps);
    }
}

}  // namespace

void adam_step(Mlp& net, const Gradients& grads, AdamState& state, double weight_decay) {
    check(weight_decay >= 0.0, "adam_step: weight_decay must be >= 0");
    check(state.slots.size() == net.layers.size() * 2, "adam_step: state/net mismatch");
    state.step += 1;
    double bias1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    double bias2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        LinearLayer& layer = net.layers[l];
        adam_update_span(layer.weights.data, grads.layers[l].d_weights.data,
                         state.slots[2 * l], state, bias1, bias2, weight_decay);
        adam_update_span(layer.biases, grads.layers[l].d_biases,
                         state.slots[2 * l + 1], state, bias1, bias2, 0.0);
    }
}

void AdamScalar::update(double& param, double grad) {
    step += 1;
    m = beta1 * m + (1.0 - beta1) * grad;
    v = beta2 * v + (1.0 - beta2) * grad * grad;
    double mhat = m / (1.0 - std::pow(beta1, static_cast<double>(step)));
    double vhat = v / (1.0 - std::pow(beta2, static_cast<double>(step)));
    param -= lr * mhat / (std::sqrt(vhat) + eps);
}

MseLoss mse_loss(const Matrix& prediction, const Matrix& target) {
    check(prediction.rows == target.rows && prediction.cols == target.cols,
          "mse_loss: shape mismatch");
    MseLoss out;
    out.output_grad = Matrix(prediction.rows, prediction.cols);
    double sum = 0.0;
    const double n = static_cast<double>(prediction.size());
    for (std::size_t i = 0; i < prediction.size(); ++i) {
        double diff = prediction.data[i] - target.data[i];
        sum += diff * diff;
        out.output_grad.data[i] = 2.0 * diff / n;
    }
    out.value = sum / n;
    return out;
}

GradCheckReport grad_check(Mlp& net, const Matrix& batch, const Matrix& target, double h) {
    ForwardCache cache = forward(net, batch);
    MseLoss loss = mse_loss(cache.output(), target);
    Gradients analytic = backward(net, cache, loss.output_grad);

    auto loss_at = [&]() { return mse_loss(forward(net, batch).output(), target).value; };

    GradCheckReport report;
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        auto probe = [&](std::span<double> params, std::span<const double> grads, bool is_bias) {
            for (std::size_t i = 0; i < params.size(); ++i) {
                double saved = params[i];
                params[i] = saved + h;
                double up = loss_at();
                params[i] = saved - h;
                double down = loss_at();
                params[i] = saved;
                double numeric = (up - down) / (2.0 * h);
                double a = grads[i];
                double rel = std::abs(a - numeric) /
                             std::max(1e-8, std::abs(a) + std::abs(numeric));
                if (rel > report.max_rel_error) {
                    report.max_rel_error = rel;
                    report.worst_layer = l;
                    report.worst_index = i;
                    report.worst_is_bias = is_bias;
                }
            }
        };
        probe(net.layers[l].weights.data, analytic.layers[l].d_weights.data, false);
        probe(net.layers[l].biases, analytic.layers[l].d_biases, true);
    }
    return report;
}

}  // namespace lffrl
