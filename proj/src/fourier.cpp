#include "lffrl/fourier.hpp"

#include <cmath>
#include <stdexcept>

namespace lffrl {

Variant variant_from_string(const std::string& s) {
    if (s == "relu") return Variant::ReLU;
    if (s == "lff") return Variant::LFF;
    if (s == "clff") return Variant::CLFF;
    throw std::invalid_argument("unknown variant: " + s);
}

const char* variant_name(Variant v) {
    switch (v) {
        case Variant::ReLU: return "relu";
        case Variant::LFF: return "lff";
        case Variant::CLFF: return "clff";
    }
    return "?";
}

namespace {

void fill_bandwidth_init(LinearLayer& layer, double beta, int d, Rng& rng) {
    const double sigma = M_PI * beta / static_cast<double>(d);
    for (double& w : layer.weights.data) w = rng.normal(0.0, sigma);
    for (double& b : layer.biases) b = rng.uniform(-M_PI, M_PI);
}

void fill_he_init(LinearLayer& layer, Rng& rng) {
    const double sigma = std::sqrt(2.0 / static_cast<double>(layer.in_dim()));
    for (double& w : layer.weights.data) w = rng.normal(0.0, sigma);
    // biases stay zero
}

void fill_glorot_init(LinearLayer& layer, Rng& rng) {
    const double limit =
        std::sqrt(6.0 / static_cast<double>(layer.in_dim() + layer.out_dim()));
    for (double& w : layer.weights.data) w = rng.uniform(-limit, limit);
}

}  // namespace

LinearLayer build_lff_layer(const FourierSpec& spec, Rng& rng) {
    check(spec.variant == Variant::LFF, "build_lff_layer: spec variant is not lff");
    check(spec.beta > 0.0, "build_lff_layer: beta must be > 0");
    check(spec.input_dim >= 1 && spec.width_multiplier >= 1,
          "build_lff_layer: bad dimensions");
    LinearLayer layer = make_layer(
        static_cast<std::size_t>(spec.width_multiplier) * spec.input_dim,
        spec.input_dim, Activation::Sin, true);
    fill_bandwidth_init(layer, spec.beta, spec.input_dim, rng);
    return layer;
}

LinearLayer build_clff_layer(const FourierSpec& spec, Rng& rng) {
    check(spec.variant == Variant::CLFF, "build_clff_layer: spec variant is not clff");
    check(spec.beta > 0.0, "build_clff_layer: beta must be > 0");
    const int d = spec.input_dim;
    const int total = spec.width_multiplier * d;
    const int k = (total - d) / 2;
    check(k >= 1, "build_clff_layer: width too small for sin||cos||x split");
    LinearLayer layer = make_layer(k, d, Activation::Sin, /*use_bias=*/false);
    const double sigma = M_PI * spec.beta / static_cast<double>(d);
    for (double& w : layer.weights.data) w = rng.normal(0.0, sigma);
    return layer;
}

BetaEstimate estimate_beta(const LinearLayer& layer, int input_dim) {
    check(!layer.weights.empty(), "estimate_beta: empty weight matrix");
    check(input_dim >= 1, "estimate_beta: input_dim must be >= 1");
    const auto& w = layer.weights.data;
    double mean = 0.0;
    for (double v : w) mean += v;
    mean /= static_cast<double>(w.size());
    double var = 0.0;
    for (double v : w) var += (v - mean) * (v - mean);
    var /= static_cast<double>(w.size());  // population variance

    BetaEstimate est;
    est.sigma_hat = std::sqrt(var);
    est.beta_hat = est.sigma_hat * static_cast<double>(input_dim) / M_PI;
    return est;
}

double li_sigma_to_beta(double sigma, int input_dim) {
    check(sigma >= 0.0, "li_sigma_to_beta: sigma must be >= 0");
    return 2.0 * sigma * static_cast<double>(input_dim);
}

Mlp build_critic(const FourierSpec& spec, Rng& rng) {
    check(spec.input_dim >= 1, "build_critic: input_dim must be >= 1");
    Mlp net;
    std::size_t prev = 0;
    switch (spec.variant) {
        case Variant::LFF: {
            net.layers.push_back(build_lff_layer(spec, rng));
            prev = net.layers.back().out_dim();
            break;
        }
        case Variant::CLFF: {
            net.clff_first = true;
            net.layers.push_back(build_clff_layer(spec, rng));
            prev = 2 * net.layers.back().out_dim() + spec.input_dim;
            break;
        }
        case Variant::ReLU: {
            LinearLayer first =
                make_layer(static_cast<std::size_t>(spec.width_multiplier) * spec.input_dim,
                           spec.input_dim, Activation::ReLU, true);
            fill_he_init(first, rng);
            net.layers.push_back(std::move(first));
            prev = net.layers.back().out_dim();
            break;
        }
    }
    for (int width : spec.hidden_widths) {
        LinearLayer l = make_layer(width, prev, Activation::ReLU, true);
        fill_he_init(l, rng);
        net.layers.push_back(std::move(l));
        prev = width;
    }
    LinearLayer head = make_layer(1, prev, Activation::Identity, true);
    fill_glorot_init(head, rng);
    net.layers.push_back(std::move(head));
    return net;
}

Mlp build_relu_mlp(int input_dim, const std::vector<int>& hidden, int out_dim, Rng& rng) {
    Mlp net;
    std::size_t prev = input_dim;
    for (int width : hidden) {
        LinearLayer l = make_layer(width, prev, Activation::ReLU, true);
        fill_he_init(l, rng);
        net.layers.push_back(std::move(l));
        prev = width;
    }
    LinearLayer head = make_layer(out_dim, prev, Activation::Identity, true);
    fill_glorot_init(head, rng);
    net.layers.push_back(std::move(head));
    return net;
}

Mlp build_sin_mlp(double beta, int input_dim, const std::vector<int>& hidden, int out_dim,
                  Rng& rng) {
    check(beta > 0.0, "build_sin_mlp: beta must be > 0");
    Mlp net;
    std::size_t prev = input_dim;
    bool first = true;
    for (int width : hidden) {
        LinearLayer l = make_layer(width, prev, Activation::Sin, true);
        if (first) {
            // bandwidth-parameterized first layer with uniform phases
            fill_bandwidth_init(l, beta, static_cast<int>(prev), rng);
        } else {
            // deeper sinusoids keep O(1) pre-activations, mirroring the relu
            // baseline's fan-in scaling
            fill_he_init(l, rng);
        }
        net.layers.push_back(std::move(l));
        prev = width;
        first = false;
    }
    LinearLayer head = make_layer(out_dim, prev, Activation::Identity, true);
    fill_glorot_init(head, rng);
    net.layers.push_back(std::move(head));
    return net;
}

}  // namespace lffrl
