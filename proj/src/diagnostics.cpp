#include "lffrl/diagnostics.hpp"

#include "lffrl/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lffrl {

std::vector<double> representation_frequency(const Matrix& weights, const Matrix& dataset) {
    check(dataset.rows > 0, "representation_frequency: dataset must be non-empty");
    check(dataset.cols == weights.cols, "representation_frequency: dataset.cols != W.cols");
    Matrix z = matmul_nt(dataset, weights);  // rows x neurons
    std::vector<double> freq(weights.rows);
    for (std::size_t j = 0; j < z.cols; ++j) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::size_t i = 0; i < z.rows; ++i) {
            lo = std::min(lo, z(i, j));
            hi = std::max(hi, z(i, j));
        }
        freq[j] = (hi - lo) / (2.0 * M_PI);
    }
    return freq;
}

FrequencyHistogram cycle_histogram(const Matrix& weights, const Matrix& dataset, int bins) {
    check(bins >= 1, "cycle_histogram: bins must be >= 1");
    FrequencyHistogram h;
    h.frequencies = representation_frequency(weights, dataset);

    double fmax = 0.0;
    for (double f : h.frequencies) fmax = std::max(fmax, f);
    if (fmax == 0.0) fmax = 1.0;  // all-zero projections land in bin 0

    h.bin_edges.resize(bins + 1);
    for (int b = 0; b <= bins; ++b)
        h.bin_edges[b] = fmax * static_cast<double>(b) / static_cast<double>(bins);
    h.counts.assign(bins, 0);

    std::size_t above = 0;
    for (double f : h.frequencies) {
        int b = std::min(static_cast<int>(f / fmax * bins), bins - 1);
        h.counts[b] += 1;
        if (f > 0.25) above += 1;
    }
    h.fraction_above_quarter_cycle =
        static_cast<double>(above) / static_cast<double>(h.frequencies.size());
    return h;
}

double histogram_overlap(const FrequencyHistogram& a, const FrequencyHistogram& b) {
    // Rebin both frequency sets onto a shared axis, then sum min of masses.
    double fmax = 0.0;
    for (double f : a.frequencies) fmax = std::max(fmax, f);
    for (double f : b.frequencies) fmax = std::max(fmax, f);
    if (fmax == 0.0) return 1.0;
    const int bins = 30;
    std::vector<double> pa(bins, 0.0), pb(bins, 0.0);
    for (double f : a.frequencies)
        pa[std::min(static_cast<int>(f / fmax * bins), bins - 1)] += 1.0 / a.frequencies.size();
    for (double f : b.frequencies)
        pb[std::min(static_cast<int>(f / fmax * bins), bins - 1)] += 1.0 / b.frequencies.size();
    double overlap = 0.0;
    for (int i = 0; i < bins; ++i) overlap += std::min(pa[i], pb[i]);
    return overlap;
}

EffectiveRank effective_rank(const Matrix& features, double delta) {
    check(delta > 0.0 && delta < 1.0, "effective_rank: delta must be in (0,1)");
    EffectiveRank out;
    bool any = std::any_of(features.data.begin(), features.data.end(),
                           [](double v) { return v != 0.0; });
    if (!any) {
        out.all_zero = true;
        return out;
    }
    std::vector<double> sv = singular_values(features);
    double total = 0.0;
    for (double s : sv) total += s;
    double cum = 0.0;
    for (std::size_t k = 0; k < sv.size(); ++k) {
        cum += sv[k];
        if (cum / total >= 1.0 - delta) {
            out.rank = k + 1;
            return out;
        }
    }
    out.rank = sv.size();
    return out;
}

namespace {

struct LayerOutputs {
    Matrix pre;   // what the cosine pairs against
    Matrix post;  // activations (CLFF: periodic slice)
};

LayerOutputs layer_outputs(const LinearLayer& layer, const Matrix& batch, bool clff) {
    check(batch.rows > 0, "diagnostics: batch must be non-empty");
    check(batch.cols == layer.in_dim(), "diagnostics: batch.cols != layer input dim");
    Matrix z = matmul_nt(batch, layer.weights);
    if (layer.use_bias)
        for (std::size_t i = 0; i < z.rows; ++i)
            for (std::size_t j = 0; j < z.cols; ++j) z(i, j) += layer.biases[j];

    LayerOutputs out;
    if (clff) {
        const std::size_t k = layer.out_dim();
        out.pre = Matrix(z.rows, 2 * k);
        out.post = Matrix(z.rows, 2 * k);
        for (std::size_t i = 0; i < z.rows; ++i)
            for (std::size_t j = 0; j < k; ++j) {
                out.pre(i, j) = z(i, j);
                out.pre(i, k + j) = z(i, j);
                out.post(i, j) = std::sin(z(i, j));
                out.post(i, k + j) = std::cos(z(i, j));
            }
    } else {
        out.post = Matrix(z.rows, z.cols);
        for (std::size_t i = 0; i < z.size(); ++i) {
            double v = z.data[i];
            switch (layer.activation) {
                case Activation::Identity: out.post.data[i] = v; break;
                case Activation::ReLU: out.post.data[i] = v > 0.0 ? v : 0.0; break;
                case Activation::Sin: out.post.data[i] = std::sin(v); break;
                case Activation::Cos: out.post.data[i] = std::cos(v); break;
            }
        }
        out.pre = std::move(z);
    }
    return out;
}

CosineStat mean_row_cosine(const Matrix& a, const Matrix& b) {
    CosineStat stat;
    double sum = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < a.rows; ++i) {
        double aa = 0.0, bb = 0.0, ab = 0.0;
        for (std::size_t j = 0; j < a.cols; ++j) {
            aa += a(i, j) * a(i, j);
            bb += b(i, j) * b(i, j);
            ab += a(i, j) * b(i, j);
        }
        if (aa == 0.0 || bb == 0.0) {
            stat.skipped_rows += 1;
            continue;
        }
        sum += ab / (std::sqrt(aa) * std::sqrt(bb));
        used += 1;
    }
    stat.mean_cosine = used > 0 ? sum / static_cast<double>(used) : 0.0;
    return stat;
}

Matrix perturb_rows(const Matrix& batch, double sigma, Rng& rng) {
    Matrix noisy = batch;
    if (sigma == 0.0) return noisy;
    for (double& v : noisy.data) v += rng.normal(0.0, sigma);
    return noisy;
}

}  // namespace

CosineStat cosine_pre_post(const LinearLayer& layer, const Matrix& batch, bool clff) {
    LayerOutputs o = layer_outputs(layer, batch, clff);
    return mean_row_cosine(o.pre, o.post);
}

CosineStat cosine_after_noise(const LinearLayer& layer, const Matrix& batch, double sigma,
                              Rng& rng, bool clff) {
    check(sigma >= 0.0, "cosine_after_noise: sigma must be >= 0");
    LayerOutputs clean = layer_outputs(layer, batch, clff);
    LayerOutputs noisy = layer_outputs(layer, perturb_rows(batch, sigma, rng), clff);
    return mean_row_cosine(clean.post, noisy.post);
}

NoiseDistance euclidean_after_noise(const LinearLayer& layer, const Matrix& batch,
                                    double sigma, Rng& rng, bool clff) {
    check(sigma >= 0.0, "euclidean_after_noise: sigma must be >= 0");
    LayerOutputs clean = layer_outputs(layer, batch, clff);
    LayerOutputs noisy = layer_outputs(layer, perturb_rows(batch, sigma, rng), clff);
    NoiseDistance out;
    for (std::size_t i = 0; i < batch.rows; ++i) {
        double sq = 0.0;
        for (std::size_t j = 0; j < clean.post.cols; ++j) {
            double d = clean.post(i, j) - noisy.post(i, j);
            sq += d * d;
        }
        out.mean_squared += sq;
        out.mean_unsquared += std::sqrt(sq);
    }
    out.mean_squared /= static_cast<double>(batch.rows);
    out.mean_unsquared /= static_cast<double>(batch.rows);
    return out;
}

Matrix first_layer_features(const Mlp& net, const Matrix& batch) {
    LayerOutputs o = layer_outputs(net.layers.front(), batch, net.clff_first);
    return std::move(o.post);
}

DiagnosticsReport compute_diagnostics(const Mlp& critic, bool clff, const Matrix& batch,
                                      double sigma, double delta, int bins, Rng& rng) {
    const LinearLayer& first = critic.layers.front();
    DiagnosticsReport r;
    BetaEstimate est = estimate_beta(first, static_cast<int>(first.in_dim()));
    r.beta_hat = est.beta_hat;
    r.sigma_hat = est.sigma_hat;
    r.histogram = cycle_histogram(first.weights, batch, bins);
    EffectiveRank er = effective_rank(first_layer_features(critic, batch), delta);
    r.effective_rank = er.rank;
    r.rank_all_zero = er.all_zero;
    r.cos_pre_post = cosine_pre_post(first, batch, clff).mean_cosine;
    Rng noise_rng = rng.substream("diag-noise");
    r.cos_noise = cosine_after_noise(first, batch, sigma, noise_rng, clff).mean_cosine;
    Rng noise_rng2 = rng.substream("diag-noise");  // same draw pairs both metrics
    NoiseDistance nd = euclidean_after_noise(first, batch, sigma, noise_rng2, clff);
    r.euclid_noise_sq = nd.mean_squared;
    r.euclid_noise = nd.mean_unsquared;
    r.batch_size = batch.rows;
    r.sigma = sigma;
    return r;
}

}  // namespace lffrl
