#pragma once

#include "lffrl/fourier.hpp"
#include "lffrl/matrix.hpp"
#include "lffrl/rng.hpp"

#include <cstdint>
#include <vector>

namespace lffrl {

/// Uniform discretization of the mountain-car state box, cell centers.
struct Grid {
    std::size_t nx = 200;
    std::size_t nv = 200;
    double x_lo = -1.2, x_hi = 0.6;
    double v_lo = -0.07, v_hi = 0.07;

    double x_center(std::size_t i) const {
        return x_lo + (static_cast<double>(i) + 0.5) * (x_hi - x_lo) / static_cast<double>(nx);
    }
    double v_center(std::size_t j) const {
        return v_lo + (static_cast<double>(j) + 0.5) * (v_hi - v_lo) / static_cast<double>(nv);
    }
    std::size_t snap_x(double x) const;
    std::size_t snap_v(double v) const;
};

/// Q(s, a=0) of the converged discrete-action table.
struct ValueTable {
    Matrix values;  // nx x nv
    double gamma = 0.99;
};

struct ValueIterationResult {
    ValueTable table;
    std::vector<double> residuals;  // sup-norm change per sweep
    std::size_t sweeps = 0;
    bool converged = false;
};

/// Synchronous Bellman sweeps over the 3-action mountain car evaluated from
/// cell centers with nearest-cell snapping. Terminal cells (x >= 0.5) stay 0.
/// Converges when the sup-norm change drops below tol; gives up after
/// max_sweeps and reports the last residual.
ValueIterationResult value_iteration(const Grid& grid, double gamma, double tol = 1e-6,
                                     std::size_t max_sweeps = 100000);

struct CheckerboardSplit {
    std::size_t block = 25;
    /// Light blocks train, dark blocks test.
    bool is_train(std::size_t i, std::size_t j) const {
        return ((i / block) + (j / block)) % 2 == 0;
    }
};

CheckerboardSplit checkerboard_split(const Grid& grid, std::size_t block);

enum class FitArch { ReLU, Sin };

struct FitConfig {
    FitArch arch = FitArch::ReLU;
    double beta = 10.0 / M_PI;  // sin net only
    std::vector<int> hidden = {400, 400};
    double lr = 1e-4;
    long steps = 50000;
    long batch = 512;        // 0 = full train batch
    long report_every = 1000;
    std::uint64_t seed = 0;
};

struct FitCurvePoint {
    long step;
    double train_mse;
    double test_mse;
};

struct FitResult {
    std::vector<FitCurvePoint> curve;
    Matrix predicted;  // nx x nv surface from the trained net
    double final_train_mse = 0.0;
    double final_test_mse = 0.0;
};

/// Fits an MLP to the DP table on the train cells only and tracks MSE on both
/// partitions. Aborts with an error if the loss diverges to NaN.
FitResult fit_supervised(const FitConfig& cfg, const Grid& grid, const ValueTable& table,
                         const CheckerboardSplit& split);

}  // namespace lffrl
