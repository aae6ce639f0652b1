#pragma once

#include "lffrl/nn.hpp"
#include "lffrl/rng.hpp"

#include <string>
#include <vector>

namespace lffrl {

enum class Variant { ReLU, LFF, CLFF };

Variant variant_from_string(const std::string& s);
const char* variant_name(Variant v);

/// Architecture descriptor for a critic (or a supervised fit network).
/// beta is the initial bandwidth of the periodic first layer: weights are
/// drawn N(0, (pi*beta/d)^2), i.e. the second moment parameter is read as a
/// standard deviation, and biases U(-pi, pi).
struct FourierSpec {
    Variant variant = Variant::LFF;
    double beta = 1.0;
    int input_dim = 0;
    int width_multiplier = 40;               // first-layer width = multiplier * input_dim
    std::vector<int> hidden_widths = {1024, 1024};
};

/// sin(Wx+b) first layer per the spec'd init. Rejects beta <= 0.
LinearLayer build_lff_layer(const FourierSpec& spec, Rng& rng);

/// Shared-W, no-bias first layer whose output is (sin(Wx), cos(Wx), x).
/// Row count is chosen so the total output width matches the LFF layer's
/// width: rows = (multiplier*d - d) / 2.
LinearLayer build_clff_layer(const FourierSpec& spec, Rng& rng);

struct BetaEstimate {
    double beta_hat = 0.0;
    double sigma_hat = 0.0;  // population std of all first-layer weights
};

/// Reads the bandwidth off a trained periodic layer: sigma_hat is the
/// population standard deviation of the weight entries (mean subtracted),
/// and beta_hat = sigma_hat * d / pi.
BetaEstimate estimate_beta(const LinearLayer& layer, int input_dim);

/// Converts a weight std-dev convention into a bandwidth: 2*pi*sigma = pi*beta/d,
/// so beta = 2 * sigma * d.
double li_sigma_to_beta(double sigma, int input_dim);

/// Full critic: periodic (or ReLU) first layer of width multiplier*d, then
/// ReLU hidden layers, then a scalar linear head.
Mlp build_critic(const FourierSpec& spec, Rng& rng);

/// Plain ReLU MLP with He-normal init, identity head of width out_dim.
Mlp build_relu_mlp(int input_dim, const std::vector<int>& hidden, int out_dim, Rng& rng);

/// MLP with sinusoids throughout: each sin layer uses the bandwidth init with
/// its own fan-in, the head is linear.
Mlp build_sin_mlp(double beta, int input_dim, const std::vector<int>& hidden, int out_dim,
                  Rng& rng);

}  // namespace lffrl
