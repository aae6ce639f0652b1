#pragma once

#include "lffrl/dp.hpp"
#include "lffrl/envs.hpp"
#include "lffrl/sac.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace lffrl {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg, std::string key_path = "")
        : std::runtime_error(msg), key(std::move(key_path)) {}
    std::string key;
};

/// Flat-sectioned plain-text config: "[section]" headers, "key = value" lines,
/// '#' comments, whitespace-separated lists. Typed getters consume keys and
/// finish() rejects anything the schema never consumed, with its key path.
class Config {
public:
    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback);
    std::string require_string(const std::string& key);
    double get_real(const std::string& key, double fallback);
    long get_int(const std::string& key, long fallback);
    bool get_bool(const std::string& key, bool fallback);
    std::vector<double> get_real_list(const std::string& key, std::vector<double> fallback);
    std::vector<long> get_int_list(const std::string& key, std::vector<long> fallback);

    /// Throws ConfigError for any present key no getter consumed.
    void finish() const;

    const std::string& text() const { return text_; }

private:
    struct Entry {
        std::string value;
        int line = 0;
        mutable bool consumed = false;
    };
    std::string raw(const std::string& key);
    std::map<std::string, Entry> entries_;
    std::string origin_;
    std::string text_;
};

/// Everything one experiment needs, assembled and validated from a Config.
struct ExperimentConfig {
    // [run]
    std::string out_dir = "runs/out";
    std::vector<std::uint64_t> seeds = {1};
    // [env]
    std::string env_name = "pendulum";
    NoiseSpec noise;
    // [sac] + [fourier]
    SacConfig sac;
    std::vector<double> beta_grid;
    long sweep_eval_step = 10000;
    // [dp]
    Grid dp_grid;
    double dp_gamma = 0.99;
    std::size_t dp_block = 25;
    FitConfig dp_fit;  // arch/seed filled per fit
    // [diagnostics]
    long diag_batch = 256;
    double diag_delta = 0.01;
    int diag_bins = 30;
    double diag_sigma = -1.0;  // <0 = use noise.medium

    std::string config_text;
};

ExperimentConfig experiment_from_config(Config cfg);
ExperimentConfig load_experiment_config(const std::string& path);

}  // namespace lffrl
