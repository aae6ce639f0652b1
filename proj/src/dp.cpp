#include "lffrl/dp.hpp"

#include "lffrl/envs.hpp"
#include "lffrl/nn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lffrl {

std::size_t Grid::snap_x(double x) const {
    double t = (x - x_lo) / (x_hi - x_lo) * static_cast<double>(nx);
    long i = static_cast<long>(std::floor(t));
    return static_cast<std::size_t>(std::clamp(i, 0L, static_cast<long>(nx) - 1));
}

std::size_t Grid::snap_v(double v) const {
    double t = (v - v_lo) / (v_hi - v_lo) * static_cast<double>(nv);
    long j = static_cast<long>(std::floor(t));
    return static_cast<std::size_t>(std::clamp(j, 0L, static_cast<long>(nv) - 1));
}

ValueIterationResult value_iteration(const Grid& grid, double gamma, double tol,
                                     std::size_t max_sweeps) {
    check(gamma > 0.0 && gamma < 1.0, "value_iteration: gamma must be in (0,1)");
    check(grid.nx >= 2 && grid.nv >= 2, "value_iteration: grid must be at least 2x2");

    const std::size_t n = grid.nx * grid.nv;
    // Precompute per-(cell, action) successor cell and terminal mask.
    std::vector<std::size_t> next(n * 3);
    std::vector<char> terminal(n);
    for (std::size_t i = 0; i < grid.nx; ++i) {
        for (std::size_t j = 0; j < grid.nv; ++j) {
            const std::size_t c = i * grid.nv + j;
            terminal[c] = grid.x_center(i) >= kMcGoalPosition ? 1 : 0;
            for (int a = 0; a < 3; ++a) {
                MountainCarState s{grid.x_center(i), grid.v_center(j)};
                mc_step_discrete(s, a);
                next[c * 3 + a] = grid.snap_x(s.position) * grid.nv + grid.snap_v(s.velocity);
            }
        }
    }

    // Q over all 3 actions; the a=0 slice is what gets returned.
    std::vector<double> q(n * 3, 0.0), q_new(n * 3, 0.0);
    ValueIterationResult result;
    result.residuals.reserve(2048);

    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        double residual = 0.0;
        for (std::size_t c = 0; c < n; ++c) {
            if (terminal[c]) continue;  // terminal cells pinned at 0
            for (int a = 0; a < 3; ++a) {
                const std::size_t s2 = next[c * 3 + a];
                double v2 = 0.0;
                if (!terminal[s2])
                    v2 = std::max({q[s2 * 3], q[s2 * 3 + 1], q[s2 * 3 + 2]});
                double y = -1.0 + gamma * v2;
                residual = std::max(residual, std::abs(y - q[c * 3 + a]));
                q_new[c * 3 + a] = y;
            }
        }
        q.swap(q_new);
        result.residuals.push_back(residual);
        result.sweeps = sweep + 1;
        if (residual < tol) {
            result.converged = true;
            break;
        }
    }

    result.table.gamma = gamma;
    result.table.values = Matrix(grid.nx, grid.nv);
    for (std::size_t i = 0; i < grid.nx; ++i)
        for (std::size_t j = 0; j < grid.nv; ++j)
            result.table.values(i, j) = q[(i * grid.nv + j) * 3];

    if (!result.converged)
        throw std::runtime_error("value_iteration: no convergence after " +
                                 std::to_string(max_sweeps) + " sweeps, residual " +
                                 std::to_string(result.residuals.back()));
    return result;
}

CheckerboardSplit checkerboard_split(const Grid& grid, std::size_t block) {
    check(block >= 1, "checkerboard_split: block must be >= 1");
    check(block < grid.nx || block < grid.nv,
          "checkerboard_split: block size covers the whole grid");
    return CheckerboardSplit{block};
}

FitResult fit_supervised(const FitConfig& cfg, const Grid& grid, const ValueTable& table,
                         const CheckerboardSplit& split) {
    check(table.values.rows == grid.nx && table.values.cols == grid.nv,
          "fit_supervised: table does not match grid");

    std::vector<std::pair<std::size_t, std::size_t>> train_cells, test_cells;
    for (std::size_t i = 0; i < grid.nx; ++i)
        for (std::size_t j = 0; j < grid.nv; ++j)
            (split.is_train(i, j) ? train_cells : test_cells).push_back({i, j});
    check(!train_cells.empty() && !test_cells.empty(),
          "fit_supervised: both partitions must be non-empty");

    // Inputs map to [-1,1]^2 and targets are z-scored on the train cells; at
    // the fixed small learning rate the raw value scale would dominate the
    // step budget otherwise. MSE curves are reported in standardized units.
    double y_mean = 0.0, y_var = 0.0;
    for (const auto& [i, j] : train_cells) y_mean += table.values(i, j);
    y_mean /= static_cast<double>(train_cells.size());
    for (const auto& [i, j] : train_cells) {
        double d = table.values(i, j) - y_mean;
        y_var += d * d;
    }
    const double y_std = std::max(std::sqrt(y_var / train_cells.size()), 1e-12);

    auto norm_x = [&](double x) {
        return 2.0 * (x - grid.x_lo) / (grid.x_hi - grid.x_lo) - 1.0;
    };
    auto norm_v = [&](double v) {
        return 2.0 * (v - grid.v_lo) / (grid.v_hi - grid.v_lo) - 1.0;
    };

    auto make_batch = [&](const std::vector<std::pair<std::size_t, std::size_t>>& cells) {
        Matrix x(cells.size(), 2), y(cells.size(), 1);
        for (std::size_t r = 0; r < cells.size(); ++r) {
            x(r, 0) = norm_x(grid.x_center(cells[r].first));
            x(r, 1) = norm_v(grid.v_center(cells[r].second));
            y(r, 0) = (table.values(cells[r].first, cells[r].second) - y_mean) / y_std;
        }
        return std::pair{std::move(x), std::move(y)};
    };
    auto [train_x, train_y] = make_batch(train_cells);
    auto [test_x, test_y] = make_batch(test_cells);

    Rng root(cfg.seed);
    Rng init_rng = root.substream("init");
    Rng sampler = root.substream("sampler");

    Mlp net = cfg.arch == FitArch::Sin
                  ? build_sin_mlp(cfg.beta, 2, cfg.hidden, 1, init_rng)
                  : build_relu_mlp(2, cfg.hidden, 1, init_rng);
    AdamState opt = make_adam(net, cfg.lr);

    const long batch = cfg.batch > 0 ? cfg.batch : static_cast<long>(train_cells.size());
    Matrix xb(batch, 2), yb(batch, 1);

    auto partition_mse = [&](const Matrix& x, const Matrix& y) {
        return mse_loss(forward(net, x).output(), y).value;
    };

    FitResult result;
    for (long step = 1; step <= cfg.steps; ++step) {
        if (cfg.batch > 0) {
            for (long r = 0; r < batch; ++r) {
                std::size_t pick = sampler.uniform_index(train_cells.size());
                xb(r, 0) = train_x(pick, 0);
                xb(r, 1) = train_x(pick, 1);
                yb(r, 0) = train_y(pick, 0);
            }
        }
        const Matrix& x = cfg.batch > 0 ? xb : train_x;
        const Matrix& y = cfg.batch > 0 ? yb : train_y;

        ForwardCache cache = forward(net, x);
        MseLoss loss = mse_loss(cache.output(), y);
        if (!std::isfinite(loss.value))
            throw std::runtime_error("fit_supervised: loss diverged at step " +
                                     std::to_string(step));
        Gradients grads = backward(net, cache, loss.output_grad);
        adam_step(net, grads, opt);

        if (step % cfg.report_every == 0 || step == cfg.steps) {
            result.curve.push_back(
                {step, partition_mse(train_x, train_y), partition_mse(test_x, test_y)});
        }
    }
    result.final_train_mse = result.curve.back().train_mse;
    result.final_test_mse = result.curve.back().test_mse;

    // predicted surface goes back out in value units
    result.predicted = Matrix(grid.nx, grid.nv);
    Matrix all(grid.nx * grid.nv, 2);
    for (std::size_t i = 0; i < grid.nx; ++i)
        for (std::size_t j = 0; j < grid.nv; ++j) {
            all(i * grid.nv + j, 0) = norm_x(grid.x_center(i));
            all(i * grid.nv + j, 1) = norm_v(grid.v_center(j));
        }
    Matrix pred = forward(net, all).output();
    for (std::size_t c = 0; c < pred.rows; ++c)
        result.predicted.data[c] = pred(c, 0) * y_std + y_mean;
    return result;
}

}  // namespace lffrl
