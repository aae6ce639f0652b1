#pragma once

#include "lffrl/matrix.hpp"
#include "lffrl/rng.hpp"

#include <vector>

namespace lffrl {

enum class Activation { Identity, ReLU, Sin, Cos };

const char* activation_name(Activation a);

struct LinearLayer {
    Matrix weights;               // out x in
    std::vector<double> biases;   // out (empty when use_bias is false)
    Activation activation = Activation::Identity;
    bool use_bias = true;

    std::size_t in_dim() const { return weights.cols; }
    std::size_t out_dim() const { return weights.rows; }
};

/// Feed-forward net. When clff_first is set, layer 0 has no bias and its
/// output is the concatenation (sin(Wx), cos(Wx), x); later layers are plain.
struct Mlp {
    std::vector<LinearLayer> layers;
    bool clff_first = false;

    std::size_t input_dim() const { return layers.front().in_dim(); }
    std::size_t output_dim() const;
    std::size_t layer_output_dim(std::size_t l) const;
    std::size_t parameter_count() const;
};

LinearLayer make_layer(std::size_t out, std::size_t in, Activation act, bool use_bias = true);

/// All intermediate pre/post-activations of one forward pass; diagnostics and
/// backward both consume these.
struct ForwardCache {
    Matrix input;
    std::vector<Matrix> pre;   // per layer, before activation (CLFF: Wx)
    std::vector<Matrix> post;  // per layer, after activation (CLFF: sin||cos||x)

    const Matrix& output() const& { return post.back(); }
    Matrix output() && { return std::move(post.back()); }  // keeps temporaries safe
};

ForwardCache forward(const Mlp& net, const Matrix& batch);

struct LayerGrads {
    Matrix d_weights;
    std::vector<double> d_biases;
};

struct Gradients {
    std::vector<LayerGrads> layers;
    Matrix d_input;  // gradient w.r.t. the input batch
};

/// Reverse-mode pass. output_grad is dLoss/dOutput with the output's shape.
/// ReLU subgradient at exactly 0 is taken as 0.
Gradients backward(const Mlp& net, const ForwardCache& cache, const Matrix& output_grad);

Gradients zero_gradients(const Mlp& net);
void accumulate(Gradients& into, const Gradients& from, double scale = 1.0);

struct AdamState {
    struct Slot {
        std::vector<double> m, v;
    };
    std::vector<Slot> slots;  // weight slot then bias slot per layer
    long step = 0;
    double lr = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

AdamState make_adam(const Mlp& net, double lr);

/// One Adam update. weight_decay adds lambda*w to the gradient of weight
/// matrices only (never biases) before the moment updates, matching an L2
/// penalty in the loss. lambda must be >= 0.
void adam_step(Mlp& net, const Gradients& grads, AdamState& state, double weight_decay = 0.0);

/// Scalar Adam, used for the SAC temperature parameter.
struct AdamScalar {
    double m = 0.0, v = 0.0;
    long step = 0;
    double lr = 1e-4;
    double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;

    void update(double& param, double grad);
};

/// Mean-squared-error loss over every output entry.
struct MseLoss {
    double value;
    Matrix output_grad;
};
MseLoss mse_loss(const Matrix& prediction, const Matrix& target);

struct GradCheckReport {
    double max_rel_error = 0.0;
    std::size_t worst_layer = 0;
    std::size_t worst_index = 0;
    bool worst_is_bias = false;
};

/// Compares analytic gradients of the MSE loss against central finite
/// differences over every parameter. Relative error uses
/// |a-n| / max(1e-8, |a|+|n|).
GradCheckReport grad_check(Mlp& net, const Matrix& batch, const Matrix& target,
                           double h = 1e-5);

}  // namespace lffrl
