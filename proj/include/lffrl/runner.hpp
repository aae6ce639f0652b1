#pragma once

#include "lffrl/config.hpp"

#include <string>
#include <vector>

namespace lffrl {

inline constexpr const char* kVersion = "0.1.0";

/// Output root: FP_OUT_DIR when set, otherwise the config's run.out_dir.
std::string resolve_out_dir(const ExperimentConfig& cfg);

/// Trains one agent per seed under <out>/run_seed<k>/ (train_log.csv,
/// eval_noise.csv, diagnostics.csv, freq histograms, checkpoints, manifest)
/// and aggregates eval returns across seeds.
int cmd_train(const ExperimentConfig& cfg);

/// Runs the (beta, seed) sweep and emits beta_sweep.csv plus per-run rows.
int cmd_sweep_beta(const ExperimentConfig& cfg);

/// Value iteration, checkerboard split, and the two supervised fits; emits
/// dp_values.csv, fit_curve.csv and surface_<arch>.csv.
int cmd_dp_fit(const ExperimentConfig& cfg);

struct DiagnoseArgs {
    std::string checkpoint;
    std::string replay;
    double sigma = 0.0;
    std::string out_dir = ".";
    long batch = 256;
    double delta = 0.01;
    int bins = 30;
    std::uint64_t seed = 0;
};
int cmd_diagnose(const DiagnoseArgs& args);

struct EvalNoiseArgs {
    std::string config;
    std::vector<std::string> checkpoints;
    std::string out_dir = ".";
    int episodes = 10;
    std::uint64_t seed = 0;
    bool tune = false;
    std::vector<double> sigma_grid;  // empty = config noise levels (or default grid for tune)
};
int cmd_eval_noise(const EvalNoiseArgs& args);

struct PlotArgs {
    std::string csv;
    std::string kind = "line";  // line | hist
    std::string x;
    std::vector<std::string> y;
    std::string group;  // optional series column
    std::string out = "plot.svg";
    int bins = 30;
};
int cmd_plot(const PlotArgs& args);

// svg rendering for cmd_plot (plot.cpp)
std::string render_line_svg(const std::vector<std::string>& series_names,
                            const std::vector<std::vector<std::pair<double, double>>>& series);
std::string render_hist_svg(const std::vector<double>& values, int bins);

// shared filesystem helpers
void ensure_dir(const std::string& path);
void write_file_atomic(const std::string& path, const std::string& contents);
std::uint64_t fnv1a_hash(const std::string& text);

}  // namespace lffrl
