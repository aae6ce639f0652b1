#include "lffrl/runner.hpp"

#include "lffrl/csv.hpp"
#include "lffrl/diagnostics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <sstream>

namespace lffrl {

namespace fs = std::filesystem;

void ensure_dir(const std::string& path) { fs::create_directories(path); }

void write_file_atomic(const std::string& path, const std::string& contents) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write " + tmp);
        f << contents;
    }
    fs::rename(tmp, path);
}

std::uint64_t fnv1a_hash(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string resolve_out_dir(const ExperimentConfig& cfg) {
    const char* env = std::getenv("FP_OUT_DIR");
    return env && *env ? std::string(env) : cfg.out_dir;
}

namespace {

long now_unix() {
    return std::chrono::duration_cast<std::chrono::seconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

struct Manifest {
    std::string dir;
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
    std::string status = "running";
    long started = 0, finished = 0;
    std::vector<std::string> files;

    void write() const {
        std::ostringstream ss;
        char hash_hex[32];
        std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                      static_cast<unsigned long long>(config_hash));
        ss << "version = " << kVersion << "\n"
           << "config_hash = " << hash_hex << "\n"
           << "seed = " << seed << "\n"
           << "status = " << status << "\n"
           << "started_unix = " << started << "\n"
           << "finished_unix = " << finished << "\n";
        ss << "files =";
        for (const auto& f : files) ss << " " << f;
        ss << "\n";
        write_file_atomic(dir + "/manifest.txt", ss.str());
    }
};

std::string sigma_label(int idx) {
    switch (idx) {
        case 0: return "none";
        case 1: return "low";
        case 2: return "medium";
        case 3: return "high";
    }
    return "?";
}

double diag_sigma_for(const ExperimentConfig& cfg) {
    return cfg.diag_sigma >= 0.0 ? cfg.diag_sigma : cfg.noise.medium;
}

/// One seed's full training run with all CSV/checkpoint emission.
void train_one_seed(const ExperimentConfig& cfg, std::uint64_t seed,
                    const std::string& run_dir) {
    ensure_dir(run_dir);
    Manifest manifest{run_dir, fnv1a_hash(cfg.config_text), seed};
    manifest.started = now_unix();
    manifest.write();

    try {
        auto env = make_env(cfg.env_name);
        SacConfig sac = cfg.sac;
        sac.seed = seed;
        Rng root(seed);
        SacAgent agent = make_agent(sac, env->observation_dim(), env->action_dim(), root);
        ReplayBuffer buffer(sac.buffer_capacity, env->observation_dim(), env->action_dim());

        CsvWriter train_log(run_dir + "/train_log.csv",
                            {"step", "return", "critic_loss", "actor_loss", "alpha",
                             "beta_hat"});
        CsvWriter eval_noise(run_dir + "/eval_noise.csv",
                             {"step", "sigma_level", "mean_return", "std_return"});
        CsvWriter diag_csv(run_dir + "/diagnostics.csv",
                           {"step", "beta_hat", "sigma_hat", "effective_rank",
                            "rank_all_zero", "cos_pre_post", "cos_noise", "euclid_noise_sq",
                            "euclid_noise", "frac_above_quarter_cycle", "batch", "sigma"});
        manifest.files = {"train_log.csv", "eval_noise.csv", "diagnostics.csv"};

        const double sigmas[4] = {0.0, cfg.noise.low, cfg.noise.medium, cfg.noise.high};
        const bool clff = cfg.sac.critic_spec.variant == Variant::CLFF;

        TrainHooks hooks;
        hooks.on_eval = [&](const TrainProgress& p) {
            BetaEstimate est = estimate_beta(agent.critic1.layers.front(),
                                             static_cast<int>(agent.critic1.input_dim()));

            EvalResult noiseless;
            for (int lv = 0; lv < 4; ++lv) {
                if (lv > 0 && sigmas[lv] <= 0.0) continue;
                auto eval_env = env->clone_fresh();
                Rng eval_rng = root.substream("eval", static_cast<std::uint64_t>(p.step) * 8 + lv);
                EvalResult r = evaluate(agent, *eval_env, sigmas[lv], sac.eval_episodes,
                                        eval_rng);
                if (lv == 0) noiseless = r;
                eval_noise.row({p.step, sigma_label(lv), r.mean_return, r.std_return});
            }
            train_log.row({p.step, noiseless.mean_return, p.critic_loss, p.actor_loss,
                           p.alpha, est.beta_hat});

            if (buffer.size() > 0) {
                Rng diag_rng = root.substream("diag", static_cast<std::uint64_t>(p.step));
                long n = std::min<long>(cfg.diag_batch, static_cast<long>(buffer.size()));
                ReplayBuffer::Batch batch = buffer.sample(n, diag_rng);
                DiagnosticsReport rep =
                    compute_diagnostics(agent.critic1, clff, batch_critic_input(batch),
                                        diag_sigma_for(cfg), cfg.diag_delta, cfg.diag_bins,
                                        diag_rng);
                diag_csv.row({p.step, rep.beta_hat, rep.sigma_hat,
                              static_cast<long>(rep.effective_rank),
                              static_cast<long>(rep.rank_all_zero ? 1 : 0), rep.cos_pre_post,
                              rep.cos_noise, rep.euclid_noise_sq, rep.euclid_noise,
                              rep.histogram.fraction_above_quarter_cycle,
                              static_cast<long>(rep.batch_size), rep.sigma});

                std::string hist_path =
                    run_dir + "/freq_hist_" + std::to_string(p.step) + ".csv";
                CsvWriter hist(hist_path, {"bin_left", "bin_right", "count"});
                for (std::size_t b = 0; b < rep.histogram.counts.size(); ++b)
                    hist.row({rep.histogram.bin_edges[b], rep.histogram.bin_edges[b + 1],
                              static_cast<long>(rep.histogram.counts[b])});
                manifest.files.push_back("freq_hist_" + std::to_string(p.step) + ".csv");
            }

            std::string ckpt = run_dir + "/ckpt_" + std::to_string(p.step) + ".fpc";
            save_agent(ckpt, agent);
            manifest.files.push_back("ckpt_" + std::to_string(p.step) + ".fpc");
        };

        run_training(*env, agent, buffer, root, hooks);
        save_replay(run_dir + "/replay.fpc", buffer);
        manifest.files.push_back("replay.fpc");

        manifest.status = "complete";
        manifest.finished = now_unix();
        manifest.write();
    } catch (...) {
        manifest.status = "partial";
        manifest.finished = now_unix();
        manifest.write();
        throw;
    }
}

}  // namespace

int cmd_train(const ExperimentConfig& cfg) {
    std::string out = resolve_out_dir(cfg);
    ensure_dir(out);

    for (std::uint64_t seed : cfg.seeds)
        train_one_seed(cfg, seed, out + "/run_seed" + std::to_string(seed));

    // aggregate noiseless eval return across seeds, per step
    std::map<long, std::vector<double>> by_step;
    for (std::uint64_t seed : cfg.seeds) {
        CsvTable t = read_csv(out + "/run_seed" + std::to_string(seed) + "/train_log.csv");
        std::size_t step_col = t.column("step"), ret_col = t.column("return");
        for (std::size_t r = 0; r < t.rows.size(); ++r)
            by_step[static_cast<long>(t.number(r, step_col))].push_back(t.number(r, ret_col));
    }
    CsvWriter agg(out + "/aggregate.csv", {"step", "mean_return", "std_return", "seeds"});
    for (const auto& [step, returns] : by_step) {
        double mean = 0.0;
        for (double r : returns) mean += r;
        mean /= returns.size();
        double var = 0.0;
        for (double r : returns) var += (r - mean) * (r - mean);
        agg.row({step, mean, std::sqrt(var / returns.size()),
                 static_cast<long>(returns.size())});
    }
    return 0;
}

int cmd_sweep_beta(const ExperimentConfig& cfg) {
    if (cfg.beta_grid.empty())
        throw ConfigError("sweep-beta requires fourier.beta_grid", "fourier.beta_grid");
    std::string out = resolve_out_dir(cfg);
    ensure_dir(out);

    std::vector<SweepBetaRow> rows =
        sweep_beta(cfg.env_name, cfg.beta_grid, cfg.seeds, cfg.sac, cfg.sweep_eval_step);

    CsvWriter detail(out + "/beta_sweep_runs.csv",
                     {"beta_init", "seed", "return_at_eval", "beta_hat_final", "failed"});
    for (const auto& r : rows)
        detail.row({r.beta_init, static_cast<long>(r.seed), r.return_at_eval,
                    r.beta_hat_final, static_cast<long>(r.failed ? 1 : 0)});

    CsvWriter agg(out + "/beta_sweep.csv",
                  {"beta_init", "beta_final_mean", "beta_final_std", "return_mean",
                   "return_std"});
    for (double beta : cfg.beta_grid) {
        std::vector<double> finals, returns;
        for (const auto& r : rows)
            if (r.beta_init == beta && !r.failed) {
                finals.push_back(r.beta_hat_final);
                returns.push_back(r.return_at_eval);
            }
        if (finals.empty()) continue;
        auto stats = [](const std::vector<double>& v) {
            double mean = 0.0;
            for (double x : v) mean += x;
            mean /= v.size();
            double var = 0.0;
            for (double x : v) var += (x - mean) * (x - mean);
            return std::pair{mean, std::sqrt(var / v.size())};
        };
        auto [fm, fsd] = stats(finals);
        auto [rm, rsd] = stats(returns);
        agg.row({beta, fm, fsd, rm, rsd});
    }
    return 0;
}

int cmd_dp_fit(const ExperimentConfig& cfg) {
    std::string out = resolve_out_dir(cfg);
    ensure_dir(out);

    ValueIterationResult vi = value_iteration(cfg.dp_grid, cfg.dp_gamma);
    CsvWriter values(out + "/dp_values.csv", {"x", "v", "value"});
    for (std::size_t i = 0; i < cfg.dp_grid.nx; ++i)
        for (std::size_t j = 0; j < cfg.dp_grid.nv; ++j)
            values.row({cfg.dp_grid.x_center(i), cfg.dp_grid.v_center(j),
                        vi.table.values(i, j)});

    CheckerboardSplit split = checkerboard_split(cfg.dp_grid, cfg.dp_block);

    CsvWriter curve(out + "/fit_curve.csv", {"step", "train_mse", "test_mse", "arch"});
    for (FitArch arch : {FitArch::ReLU, FitArch::Sin}) {
        FitConfig fit = cfg.dp_fit;
        fit.arch = arch;
        fit.seed = cfg.seeds.front();
        const char* name = arch == FitArch::ReLU ? "relu" : "sin";
        FitResult res = fit_supervised(fit, cfg.dp_grid, vi.table, split);
        for (const auto& p : res.curve)
            curve.row({p.step, p.train_mse, p.test_mse, std::string(name)});
        CsvWriter surface(out + "/surface_" + name + ".csv", {"x", "v", "value"});
        for (std::size_t i = 0; i < cfg.dp_grid.nx; ++i)
            for (std::size_t j = 0; j < cfg.dp_grid.nv; ++j)
                surface.row({cfg.dp_grid.x_center(i), cfg.dp_grid.v_center(j),
                             res.predicted(i, j)});
    }
    return 0;
}

int cmd_diagnose(const DiagnoseArgs& args) {
    ensure_dir(args.out_dir);
    std::vector<TensorRecord> records = load_checkpoint(args.checkpoint);
    Mlp critic = mlp_from_tensors("critic1", records);
    ReplayBuffer::Batch replay = load_replay(args.replay);

    Rng rng(args.seed);
    Rng pick = rng.substream("diag-batch");
    long n = std::min<long>(args.batch, static_cast<long>(replay.obs.rows));
    Matrix batch(n, replay.obs.cols + replay.act.cols);
    for (long r = 0; r < n; ++r) {
        std::size_t k = pick.uniform_index(replay.obs.rows);
        for (std::size_t j = 0; j < replay.obs.cols; ++j) batch(r, j) = replay.obs(k, j);
        for (std::size_t j = 0; j < replay.act.cols; ++j)
            batch(r, replay.obs.cols + j) = replay.act(k, j);
    }

    DiagnosticsReport rep = compute_diagnostics(critic, critic.clff_first, batch, args.sigma,
                                                args.delta, args.bins, rng);

    CsvWriter diag(args.out_dir + "/diagnostics.csv",
                   {"step", "beta_hat", "sigma_hat", "effective_rank", "rank_all_zero",
                    "cos_pre_post", "cos_noise", "euclid_noise_sq", "euclid_noise",
                    "frac_above_quarter_cycle", "batch", "sigma"});
    diag.row({0L, rep.beta_hat, rep.sigma_hat, static_cast<long>(rep.effective_rank),
              static_cast<long>(rep.rank_all_zero ? 1 : 0), rep.cos_pre_post, rep.cos_noise,
              rep.euclid_noise_sq, rep.euclid_noise,
              rep.histogram.fraction_above_quarter_cycle,
              static_cast<long>(rep.batch_size), rep.sigma});

    CsvWriter hist(args.out_dir + "/freq_hist_final.csv", {"bin_left", "bin_right", "count"});
    for (std::size_t b = 0; b < rep.histogram.counts.size(); ++b)
        hist.row({rep.histogram.bin_edges[b], rep.histogram.bin_edges[b + 1],
                  static_cast<long>(rep.histogram.counts[b])});
    return 0;
}

int cmd_eval_noise(const EvalNoiseArgs& args) {
    ExperimentConfig cfg = load_experiment_config(args.config);
    ensure_dir(args.out_dir);
    auto env = make_env(cfg.env_name);

    std::vector<SacAgent> agents;
    for (const std::string& path : args.checkpoints) {
        SacConfig sac = cfg.sac;
        Rng tmp(args.seed);
        SacAgent agent = make_agent(sac, env->observation_dim(), env->action_dim(), tmp);
        load_agent(path, agent);
        agents.push_back(std::move(agent));
    }
    if (agents.empty()) throw ConfigError("eval-noise requires at least one --checkpoint");

    std::vector<double> grid = args.sigma_grid;
    if (grid.empty()) {
        if (args.tune) {
            for (double s = 0.01; s <= 5.0 * 1.0001; s *= std::pow(10.0, 0.2))
                grid.push_back(s);
        } else {
            grid = {cfg.noise.low, cfg.noise.medium, cfg.noise.high};
        }
    }

    Rng rng(args.seed);
    CsvWriter out(args.out_dir + "/eval_noise.csv",
                  {"step", "sigma_level", "mean_return", "std_return"});
    for (std::size_t a = 0; a < agents.size(); ++a) {
        auto fresh = env->clone_fresh();
        Rng base = rng.substream("eval-noise-base", a);
        EvalResult r0 = evaluate(agents[a], *fresh, 0.0, args.episodes, base);
        out.row({static_cast<long>(a), std::string("none"), r0.mean_return, r0.std_return});
        for (std::size_t i = 0; i < grid.size(); ++i) {
            auto e = env->clone_fresh();
            Rng er = rng.substream("eval-noise", a * 1000 + i);
            EvalResult r = evaluate(agents[a], *e, grid[i], args.episodes, er);
            out.row({static_cast<long>(a), CsvWriter::format_double(grid[i]), r.mean_return,
                     r.std_return});
        }
    }

    if (args.tune) {
        std::vector<SacAgent*> pool;
        for (auto& a : agents) pool.push_back(&a);
        Rng tune_rng = rng.substream("tune");
        NoiseSpec spec = tune_noise_levels(*env, pool, grid, args.episodes, tune_rng);
        std::ostringstream ss;
        ss << "[env]\n"
           << "noise.low = " << CsvWriter::format_double(spec.low)
           << (spec.low_flagged ? "  # flagged: no grid sigma satisfied the band" : "")
           << "\n"
           << "noise.medium = " << CsvWriter::format_double(spec.medium)
           << (spec.medium_flagged ? "  # flagged: no grid sigma satisfied the band" : "")
           << "\n"
           << "noise.high = " << CsvWriter::format_double(spec.high)
           << (spec.high_flagged ? "  # flagged: no grid sigma satisfied the band" : "")
           << "\n";
        write_file_atomic(args.out_dir + "/noise_spec.cfg", ss.str());
        std::printf("%s", ss.str().c_str());
    }
    return 0;
}

int cmd_plot(const PlotArgs& args) {
    CsvTable t = read_csv(args.csv);
    std::string svg;
    if (args.kind == "hist") {
        std::size_t col = t.column(args.y.empty() ? args.x : args.y.front());
        std::vector<double> values;
        for (std::size_t r = 0; r < t.rows.size(); ++r) values.push_back(t.number(r, col));
        svg = render_hist_svg(values, args.bins);
    } else if (args.kind == "line") {
        std::size_t xc = t.column(args.x);
        std::vector<std::string> names;
        std::vector<std::vector<std::pair<double, double>>> series;
        if (!args.group.empty()) {
            std::size_t gc = t.column(args.group);
            std::size_t yc = t.column(args.y.front());
            std::map<std::string, std::vector<std::pair<double, double>>> groups;
            for (std::size_t r = 0; r < t.rows.size(); ++r)
                groups[t.rows[r][gc]].push_back({t.number(r, xc), t.number(r, yc)});
            for (auto& [name, pts] : groups) {
                names.push_back(args.y.front() + ":" + name);
                series.push_back(std::move(pts));
            }
        } else {
            for (const std::string& yname : args.y) {
                std::size_t yc = t.column(yname);
                std::vector<std::pair<double, double>> pts;
                for (std::size_t r = 0; r < t.rows.size(); ++r)
                    pts.push_back({t.number(r, xc), t.number(r, yc)});
                names.push_back(yname);
                series.push_back(std::move(pts));
            }
        }
        svg = render_line_svg(names, series);
    } else {
        throw ConfigError("plot kind must be 'line' or 'hist'");
    }
    write_file_atomic(args.out, svg);
    return 0;
}

}  // namespace lffrl
