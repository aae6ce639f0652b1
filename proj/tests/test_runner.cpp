#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lffrl/config.hpp"
#include "lffrl/csv.hpp"
#include "lffrl/diagnostics.hpp"
#include "lffrl/runner.hpp"
#include "lffrl/sac.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

using namespace lffrl;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

const char* kTinyTrainConfig =
    "[run]\n"
    "out_dir = {OUT}\n"
    "seeds = 1\n"
    "[env]\n"
    "name = pendulum\n"
    "noise.low = 0.05\n"
    "noise.medium = 0.2\n"
    "noise.high = 1.0\n"
    "[sac]\n"
    "total_steps = 600\n"
    "warmup_steps = 200\n"
    "eval_interval = 300\n"
    "eval_episodes = 2\n"
    "batch_size = 16\n"
    "buffer_capacity = 2048\n"
    "actor_hidden = 8 8\n"
    "[fourier]\n"
    "variant = lff\n"
    "beta = 0.1\n"
    "width_multiplier = 4\n"
    "hidden_widths = 8 8\n"
    "[diagnostics]\n"
    "batch = 32\n";

ExperimentConfig tiny_train_config(const std::string& out) {
    std::string text = kTinyTrainConfig;
    text.replace(text.find("{OUT}"), 5, out);
    return experiment_from_config(Config::parse_string(text));
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("lffrl_test_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

}  // namespace

TEST_CASE("cmd_train writes the full per-run file set") {
    unsetenv("FP_OUT_DIR");
    TempDir tmp("train_smoke");
    ExperimentConfig cfg = tiny_train_config(tmp.str());
    REQUIRE(cmd_train(cfg) == 0);

    std::string run_dir = tmp.str() + "/run_seed1";
    for (const char* f : {"train_log.csv", "eval_noise.csv", "diagnostics.csv",
                          "replay.fpc", "manifest.txt"})
        CHECK(fs::exists(run_dir + "/" + std::string(f)));

    CsvTable log = read_csv(run_dir + "/train_log.csv");
    CHECK(log.header == std::vector<std::string>{"step", "return", "critic_loss",
                                                 "actor_loss", "alpha", "beta_hat"});
    CHECK(log.rows.size() == 2);  // evals at 300 and 600

    CsvTable noise = read_csv(run_dir + "/eval_noise.csv");
    CHECK(noise.header == std::vector<std::string>{"step", "sigma_level", "mean_return",
                                                   "std_return"});
    CHECK(noise.rows.size() == 8);  // 2 evals x {none, low, medium, high}

    CsvTable diag = read_csv(run_dir + "/diagnostics.csv");
    CHECK(diag.rows.size() == 2);
    CHECK(fs::exists(run_dir + "/ckpt_600.fpc"));
    CHECK(fs::exists(run_dir + "/freq_hist_600.csv"));

    CHECK(slurp(run_dir + "/manifest.txt").find("status = complete") != std::string::npos);
    CHECK(fs::exists(tmp.str() + "/aggregate.csv"));
}

TEST_CASE("identical configs produce byte-identical csvs") {
    unsetenv("FP_OUT_DIR");
    TempDir a("train_det_a"), b("train_det_b");
    cmd_train(tiny_train_config(a.str()));
    cmd_train(tiny_train_config(b.str()));
    for (const char* f : {"/run_seed1/train_log.csv", "/run_seed1/eval_noise.csv",
                          "/run_seed1/diagnostics.csv", "/aggregate.csv"})
        CHECK(slurp(a.str() + f) == slurp(b.str() + f));
    // checkpoints as well
    CHECK(slurp(a.str() + "/run_seed1/ckpt_600.fpc") ==
          slurp(b.str() + "/run_seed1/ckpt_600.fpc"));
}

TEST_CASE("multi-seed training aggregates mean and std per step") {
    unsetenv("FP_OUT_DIR");
    TempDir tmp("train_seeds");
    ExperimentConfig cfg = tiny_train_config(tmp.str());
    cfg.seeds = {1, 2, 3};
    REQUIRE(cmd_train(cfg) == 0);
    for (int s : {1, 2, 3})
        CHECK(fs::exists(tmp.str() + "/run_seed" + std::to_string(s) + "/train_log.csv"));

    CsvTable agg = read_csv(tmp.str() + "/aggregate.csv");
    REQUIRE(agg.rows.size() == 2);
    // recompute the aggregate from the per-seed logs
    for (std::size_t row = 0; row < agg.rows.size(); ++row) {
        long step = static_cast<long>(agg.number(row, agg.column("step")));
        std::vector<double> returns;
        for (int s : {1, 2, 3}) {
            CsvTable log = read_csv(tmp.str() + "/run_seed" + std::to_string(s) +
                                    "/train_log.csv");
            for (std::size_t r = 0; r < log.rows.size(); ++r)
                if (static_cast<long>(log.number(r, 0)) == step)
                    returns.push_back(log.number(r, 1));
        }
        REQUIRE(returns.size() == 3);
        double mean = (returns[0] + returns[1] + returns[2]) / 3.0;
        double var = 0.0;
        for (double r : returns) var += (r - mean) * (r - mean);
        CHECK(agg.number(row, agg.column("mean_return")) == doctest::Approx(mean).epsilon(1e-12));
        CHECK(agg.number(row, agg.column("std_return")) ==
              doctest::Approx(std::sqrt(var / 3.0)).epsilon(1e-9));
    }
}

TEST_CASE("FP_OUT_DIR overrides the configured output root") {
    TempDir cfg_dir("out_cfg"), env_dir("out_env");
    ExperimentConfig cfg = tiny_train_config(cfg_dir.str() + "/sub");
    setenv("FP_OUT_DIR", (env_dir.str() + "/override").c_str(), 1);
    cmd_train(cfg);
    unsetenv("FP_OUT_DIR");
    CHECK(fs::exists(env_dir.str() + "/override/run_seed1/train_log.csv"));
    CHECK_FALSE(fs::exists(cfg_dir.str() + "/sub/run_seed1/train_log.csv"));
}

TEST_CASE("divergent training leaves a partial manifest behind") {
    unsetenv("FP_OUT_DIR");
    TempDir tmp("train_partial");
    ExperimentConfig cfg = tiny_train_config(tmp.str());
    cfg.sac.critic_lr = 1e200;
    CHECK_THROWS_AS(cmd_train(cfg), TrainingDiverged);
    CHECK(slurp(tmp.str() + "/run_seed1/manifest.txt").find("status = partial") !=
          std::string::npos);
}

TEST_CASE("cmd_sweep_beta emits the aggregate and per-run tables") {
    unsetenv("FP_OUT_DIR");
    TempDir tmp("sweep");
    ExperimentConfig cfg = tiny_train_config(tmp.str());
    cfg.beta_grid = {0.01, 0.3};
    cfg.sweep_eval_step = 300;
    cfg.sac.eval_episodes = 1;
    REQUIRE(cmd_sweep_beta(cfg) == 0);

    CsvTable agg = read_csv(tmp.str() + "/beta_sweep.csv");
    CHECK(agg.header == std::vector<std::string>{"beta_init", "beta_final_mean",
                                                 "beta_final_std", "return_mean",
                                                 "return_std"});
    CHECK(agg.rows.size() == 2);
    CsvTable runs = read_csv(tmp.str() + "/beta_sweep_runs.csv");
    CHECK(runs.rows.size() == 2);  // |grid| x |seeds| = 2 x 1

    // sweep requires a grid
    ExperimentConfig no_grid = tiny_train_config(tmp.str());
    CHECK_THROWS_AS(cmd_sweep_beta(no_grid), ConfigError);
}

TEST_CASE("cmd_dp_fit emits values, curves and surfaces") {
    unsetenv("FP_OUT_DIR");
    TempDir tmp("dpfit");
    ExperimentConfig cfg = tiny_train_config(tmp.str());
    cfg.dp_grid.nx = 24;
    cfg.dp_grid.nv = 24;
    cfg.dp_block = 6;
    cfg.dp_fit.steps = 400;
    cfg.dp_fit.batch = 64;
    cfg.dp_fit.report_every = 200;
    cfg.dp_fit.hidden = {16, 16};
    REQUIRE(cmd_dp_fit(cfg) == 0);

    CsvTable values = read_csv(tmp.str() + "/dp_values.csv");
    CHECK(values.header == std::vector<std::string>{"x", "v", "value"});
    CHECK(values.rows.size() == 24 * 24);
    // terminal cells carry value zero
    std::size_t terminal_rows = 0;
    for (std::size_t r = 0; r < values.rows.size(); ++r) {
        if (values.number(r, 0) >= 0.5) {
            CHECK(values.number(r, 2) == 0.0);
            terminal_rows += 1;
        } else {
            CHECK(values.number(r, 2) < 0.0);
        }
    }
    CHECK(terminal_rows > 0);

    CsvTable curve = read_csv(tmp.str() + "/fit_curve.csv");
    CHECK(curve.header == std::vector<std::string>{"step", "train_mse", "test_mse", "arch"});
    CHECK(curve.rows.size() == 4);  // 2 archs x 2 report points
    CHECK(fs::exists(tmp.str() + "/surface_relu.csv"));
    CHECK(fs::exists(tmp.str() + "/surface_sin.csv"));
}

TEST_CASE("cmd_diagnose reproduces the checkpoint's bandwidth estimate") {
    unsetenv("FP_OUT_DIR");
    TempDir tmp("diag");
    ExperimentConfig cfg = tiny_train_config(tmp.str());
    REQUIRE(cmd_train(cfg) == 0);
    std::string run_dir = tmp.str() + "/run_seed1";

    DiagnoseArgs args;
    args.checkpoint = run_dir + "/ckpt_600.fpc";
    args.replay = run_dir + "/replay.fpc";
    args.sigma = 0.2;
    args.out_dir = tmp.str() + "/diag_out";
    args.batch = 32;
    REQUIRE(cmd_diagnose(args) == 0);

    CsvTable diag = read_csv(tmp.str() + "/diag_out/diagnostics.csv");
    REQUIRE(diag.rows.size() == 1);
    Mlp critic = mlp_from_tensors("critic1", load_checkpoint(args.checkpoint));
    BetaEstimate est =
        estimate_beta(critic.layers.front(), static_cast<int>(critic.input_dim()));
    CHECK(diag.number(0, diag.column("beta_hat")) == doctest::Approx(est.beta_hat));
    CHECK(fs::exists(tmp.str() + "/diag_out/freq_hist_final.csv"));

    SUBCASE("sigma zero zeroes the perturbation metrics") {
        args.sigma = 0.0;
        args.out_dir = tmp.str() + "/diag_zero";
        REQUIRE(cmd_diagnose(args) == 0);
        CsvTable z = read_csv(tmp.str() + "/diag_zero/diagnostics.csv");
        CHECK(z.number(0, z.column("euclid_noise_sq")) == 0.0);
        CHECK(z.number(0, z.column("euclid_noise")) == 0.0);
        CHECK(z.number(0, z.column("cos_noise")) == 1.0);
    }

    SUBCASE("corrupt checkpoints fail with a byte offset") {
        std::string broken = tmp.str() + "/broken.fpc";
        std::string bytes = slurp(args.checkpoint);
        std::ofstream f(broken, std::ios::binary);
        f.write(bytes.data(), static_cast<long>(bytes.size() / 2));
        f.close();
        args.checkpoint = broken;
        CHECK_THROWS_AS(cmd_diagnose(args), CheckpointError);
    }
}

TEST_CASE("cmd_eval_noise evaluates checkpoints across sigma levels") {
    unsetenv("FP_OUT_DIR");
    TempDir tmp("evalnoise");
    ExperimentConfig cfg = tiny_train_config(tmp.str());
    REQUIRE(cmd_train(cfg) == 0);

    std::string cfg_path = tmp.str() + "/exp.cfg";
    {
        std::string text = kTinyTrainConfig;
        text.replace(text.find("{OUT}"), 5, tmp.str());
        std::ofstream f(cfg_path);
        f << text;
    }

    EvalNoiseArgs args;
    args.config = cfg_path;
    args.checkpoints = {tmp.str() + "/run_seed1/ckpt_600.fpc"};
    args.out_dir = tmp.str() + "/en";
    args.episodes = 2;
    REQUIRE(cmd_eval_noise(args) == 0);
    CsvTable t = read_csv(tmp.str() + "/en/eval_noise.csv");
    CHECK(t.rows.size() == 4);  // none + low/medium/high

    args.tune = true;
    args.sigma_grid = {0.01, 0.5, 2.0};
    args.out_dir = tmp.str() + "/en_tuned";
    REQUIRE(cmd_eval_noise(args) == 0);
    CHECK(fs::exists(tmp.str() + "/en_tuned/noise_spec.cfg"));
    std::string spec = slurp(tmp.str() + "/en_tuned/noise_spec.cfg");
    CHECK(spec.find("noise.low") != std::string::npos);
    CHECK(spec.find("noise.medium") != std::string::npos);
    CHECK(spec.find("noise.high") != std::string::npos);
}

TEST_CASE("cmd_plot renders line and histogram svgs") {
    unsetenv("FP_OUT_DIR");
    TempDir tmp("plot");
    {
        CsvWriter w(tmp.str() + "/data.csv", {"step", "a", "b", "arch"});
        for (int i = 0; i < 20; ++i)
            w.row({static_cast<long>(i), i * 0.5, 10.0 - i * 0.3,
                   std::string(i % 2 ? "x" : "y")});
    }
    PlotArgs line;
    line.csv = tmp.str() + "/data.csv";
    line.kind = "line";
    line.x = "step";
    line.y = {"a", "b"};
    line.out = tmp.str() + "/line.svg";
    REQUIRE(cmd_plot(line) == 0);
    std::string svg = slurp(line.out);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);

    PlotArgs grouped = line;
    grouped.y = {"a"};
    grouped.group = "arch";
    grouped.out = tmp.str() + "/grouped.svg";
    REQUIRE(cmd_plot(grouped) == 0);

    PlotArgs hist;
    hist.csv = tmp.str() + "/data.csv";
    hist.kind = "hist";
    hist.y = {"a"};
    hist.bins = 8;
    hist.out = tmp.str() + "/hist.svg";
    REQUIRE(cmd_plot(hist) == 0);
    CHECK(slurp(hist.out).find("rect") != std::string::npos);
}

#ifdef LFFRL_BIN
TEST_CASE("cli exit codes: 0 ok, 1 config error, 2 runtime failure") {
    unsetenv("FP_OUT_DIR");
    TempDir tmp("cli");
    std::string cfg_path = tmp.str() + "/exp.cfg";
    {
        std::string text = kTinyTrainConfig;
        text.replace(text.find("{OUT}"), 5, tmp.str() + "/out");
        std::ofstream f(cfg_path);
        f << text;
    }
    std::string bin = LFFRL_BIN;
    auto run = [&](const std::string& args) {
        int rc = std::system((bin + " " + args + " > /dev/null 2>&1").c_str());
        return WEXITSTATUS(rc);
    };
    CHECK(run("train -c " + cfg_path) == 0);

    std::string bad_path = tmp.str() + "/bad.cfg";
    {
        std::ofstream f(bad_path);
        f << "[sac]\nnot_a_key = 1\n";
    }
    CHECK(run("train -c " + bad_path) == 1);
    CHECK(run("diagnose --checkpoint /nonexistent.fpc --replay /nonexistent.fpc") == 2);
}
#endif
