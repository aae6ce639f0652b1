#include "lffrl/checkpoint.hpp"
#include "lffrl/config.hpp"
#include "lffrl/runner.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>

using namespace lffrl;

int main(int argc, char** argv) {
    CLI::App app{"learned-Fourier-feature value networks: training, sweeps and diagnostics"};
    app.require_subcommand(1);

    std::string config_path;

    auto* train = app.add_subcommand("train", "train one SAC agent per seed");
    train->add_option("-c,--config", config_path, "experiment config file")->required();

    auto* sweep = app.add_subcommand("sweep-beta", "train across an initial-bandwidth grid");
    sweep->add_option("-c,--config", config_path, "experiment config file")->required();

    auto* dpfit = app.add_subcommand(
        "dp-fit", "value-iteration ground truth plus supervised relu/sin fits");
    dpfit->add_option("-c,--config", config_path, "experiment config file")->required();

    DiagnoseArgs diag;
    auto* diagnose = app.add_subcommand("diagnose", "representation report for a checkpoint");
    diagnose->add_option("--checkpoint", diag.checkpoint, "agent checkpoint (FPC1)")
        ->required();
    diagnose->add_option("--replay", diag.replay, "replay dump (FPC1)")->required();
    diagnose->add_option("--sigma", diag.sigma, "noise level for perturbation metrics");
    diagnose->add_option("--out", diag.out_dir, "output directory");
    diagnose->add_option("--batch", diag.batch, "replay sample size");
    diagnose->add_option("--delta", diag.delta, "effective-rank delta");
    diagnose->add_option("--bins", diag.bins, "histogram bins");
    diagnose->add_option("--seed", diag.seed, "rng seed");

    EvalNoiseArgs en;
    auto* evalnoise =
        app.add_subcommand("eval-noise", "evaluate checkpoints under observation noise");
    evalnoise->add_option("-c,--config", en.config, "experiment config file")->required();
    evalnoise->add_option("--checkpoint", en.checkpoints, "agent checkpoint(s)")->required();
    evalnoise->add_option("--out", en.out_dir, "output directory");
    evalnoise->add_option("--episodes", en.episodes, "episodes per sigma");
    evalnoise->add_option("--seed", en.seed, "rng seed");
    evalnoise->add_flag("--tune", en.tune, "derive low/medium/high noise levels");
    evalnoise->add_option("--sigma-grid", en.sigma_grid, "explicit sigma grid");

    PlotArgs plot;
    auto* plotcmd = app.add_subcommand("plot", "render a CSV as an SVG line plot or histogram");
    plotcmd->add_option("--csv", plot.csv, "input csv")->required();
    plotcmd->add_option("--kind", plot.kind, "line or hist");
    plotcmd->add_option("--x", plot.x, "x column");
    plotcmd->add_option("--y", plot.y, "y column(s)");
    plotcmd->add_option("--group", plot.group, "series column (one line per value)");
    plotcmd->add_option("--out", plot.out, "output svg path");
    plotcmd->add_option("--bins", plot.bins, "histogram bins");

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) return cmd_train(load_experiment_config(config_path));
        if (sweep->parsed()) return cmd_sweep_beta(load_experiment_config(config_path));
        if (dpfit->parsed()) return cmd_dp_fit(load_experiment_config(config_path));
        if (diagnose->parsed()) return cmd_diagnose(diag);
        if (evalnoise->parsed()) return cmd_eval_noise(en);
        if (plotcmd->parsed()) return cmd_plot(plot);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
