#pragma once

#include "lffrl/matrix.hpp"
#include "lffrl/nn.hpp"
#include "lffrl/rng.hpp"

#include <vector>

namespace lffrl {

/// Wavelengths swept by each neuron's pre-bias projection over a dataset:
/// f_i = (max_x (Wx)_i - min_x (Wx)_i) / (2*pi). The bias is a phase and is
/// deliberately excluded.
std::vector<double> representation_frequency(const Matrix& weights, const Matrix& dataset);

struct FrequencyHistogram {
    std::vector<double> frequencies;  // per neuron
    std::vector<double> bin_edges;    // bins+1 edges
    std::vector<std::size_t> counts;  // per bin
    double fraction_above_quarter_cycle = 0.0;
};

FrequencyHistogram cycle_histogram(const Matrix& weights, const Matrix& dataset, int bins);

/// Overlap coefficient of two histograms over a shared binning in [0, 1].
double histogram_overlap(const FrequencyHistogram& a, const FrequencyHistogram& b);

struct EffectiveRank {
    std::size_t rank = 0;
    bool all_zero = false;
};

/// srank_delta: smallest k whose top-k singular values carry a (1-delta)
/// fraction of the spectrum mass of the feature matrix.
EffectiveRank effective_rank(const Matrix& features, double delta);

struct CosineStat {
    double mean_cosine = 0.0;
    std::size_t skipped_rows = 0;  // rows with a zero-norm side
};

/// Mean row-wise cosine between pre-activations (Wx+b) and post-activations
/// g(Wx+b). For a CLFF first layer the periodic slice (sin||cos) is compared
/// against the duplicated projection (Wx || Wx).
CosineStat cosine_pre_post(const LinearLayer& layer, const Matrix& batch, bool clff = false);

/// Mean row-wise cosine between g(Wx+b) and g(W(x+eps)+b), one noise draw per
/// row shared by the pair.
CosineStat cosine_after_noise(const LinearLayer& layer, const Matrix& batch, double sigma,
                              Rng& rng, bool clff = false);

struct NoiseDistance {
    double mean_squared = 0.0;    // mean ||g(Wx+b) - g(W(x+eps)+b)||^2
    double mean_unsquared = 0.0;  // mean of the plain Euclidean norm
};

NoiseDistance euclidean_after_noise(const LinearLayer& layer, const Matrix& batch,
                                    double sigma, Rng& rng, bool clff = false);

/// One snapshot's worth of representation measurements, taken on the first
/// layer of a critic over a replay batch. For CLFF nets the feature matrix is
/// the periodic slice only so the three variants are comparable.
struct DiagnosticsReport {
    double beta_hat = 0.0;
    double sigma_hat = 0.0;
    FrequencyHistogram histogram;
    std::size_t effective_rank = 0;
    bool rank_all_zero = false;
    double cos_pre_post = 0.0;
    double cos_noise = 0.0;
    double euclid_noise_sq = 0.0;
    double euclid_noise = 0.0;
    std::size_t batch_size = 0;
    double sigma = 0.0;
};

DiagnosticsReport compute_diagnostics(const Mlp& critic, bool clff, const Matrix& batch,
                                      double sigma, double delta, int bins, Rng& rng);

/// Post-activation features of the first layer; CLFF yields the periodic
/// slice only (raw-input suffix dropped).
Matrix first_layer_features(const Mlp& net, const Matrix& batch);

}  // namespace lffrl
