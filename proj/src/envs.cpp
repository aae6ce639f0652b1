#include "lffrl/envs.hpp"

#include "lffrl/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lffrl {

namespace {

double clip(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

double wrap_angle(double theta) {
    // into [-pi, pi)
    theta = std::fmod(theta + M_PI, 2.0 * M_PI);
    if (theta < 0.0) theta += 2.0 * M_PI;
    return theta - M_PI;
}

StepResult mc_apply(MountainCarState& state, double force) {
    double v = clip(state.velocity + force - 0.0025 * std::cos(3.0 * state.position),
                    -kMcVelocityMax, kMcVelocityMax);
    double x = clip(state.position + v, kMcPositionMin, kMcPositionMax);
    state.position = x;
    state.velocity = v;
    StepResult r;
    r.observation = {x, v};
    r.reward = -1.0;
    r.done = x >= kMcGoalPosition;
    return r;
}

}  // namespace

std::unique_ptr<Env> make_env(const std::string& name) {
    if (name == "mountain_car_continuous") return std::make_unique<MountainCarContinuous>();
    if (name == "pendulum") return std::make_unique<PendulumSwingup>();
    throw std::invalid_argument("unknown environment: " + name);
}

StepResult mc_step_discrete(MountainCarState& state, int action) {
    check(action >= 0 && action <= 2, "mc_step: discrete action must be in {0,1,2}");
    return mc_apply(state, 0.001 * (action - 1));
}

StepResult mc_step_continuous(MountainCarState& state, double action) {
    check(action >= -1.0 && action <= 1.0, "mc_step: continuous action must be in [-1,1]");
    return mc_apply(state, 0.0015 * action);
}

std::vector<double> MountainCarContinuous::reset(Rng& rng) {
    state_.position = rng.uniform(-0.6, -0.4);
    state_.velocity = 0.0;
    steps_ = 0;
    return {state_.position, state_.velocity};
}

StepResult MountainCarContinuous::step(std::span<const double> action) {
    check(action.size() == 1, "mountain car takes a single throttle value");
    StepResult r = mc_step_continuous(state_, action[0]);
    steps_ += 1;
    if (!r.done && steps_ >= horizon()) {
        r.done = true;
        r.truncated = true;
    }
    return r;
}

std::vector<double> PendulumSwingup::observe() const {
    return {std::cos(state_.theta), std::sin(state_.theta), state_.omega};
}

std::vector<double> PendulumSwingup::reset(Rng& rng) {
    state_.theta = rng.uniform(-M_PI, M_PI);
    state_.omega = rng.uniform(-1.0, 1.0);
    steps_ = 0;
    return observe();
}

double PendulumSwingup::energy(const PendulumState& s) {
    // Rod pendulum matching the equation of motion below: I = m*l^2/3,
    // center of mass at l/2, theta measured from upright.
    constexpr double g = 10.0, m = 1.0, l = 1.0;
    return (m * l * l / 6.0) * s.omega * s.omega + (m * g * l / 2.0) * std::cos(s.theta);
}

StepResult PendulumSwingup::step(std::span<const double> action) {
    check(action.size() == 1, "pendulum takes a single torque value");
    constexpr double g = 10.0, m = 1.0, l = 1.0, dt = 0.05;
    double torque = action[0];
    if (torque < -2.0 || torque > 2.0) {
        clip_warnings_ += 1;
        torque = clip(torque, -2.0, 2.0);
    }

    const double theta = state_.theta, omega = state_.omega;
    double reward = -(theta * theta + 0.1 * omega * omega + 0.001 * torque * torque);

    double omega_next = omega + (3.0 * g / (2.0 * l) * std::sin(theta) +
                                 3.0 / (m * l * l) * torque) * dt;
    omega_next = clip(omega_next, -8.0, 8.0);
    state_.theta = wrap_angle(theta + omega_next * dt);
    state_.omega = omega_next;

    steps_ += 1;
    StepResult r;
    r.observation = observe();
    r.reward = reward;
    if (steps_ >= horizon()) {
        r.done = true;
        r.truncated = true;
    }
    return r;
}

std::vector<double> add_observation_noise(std::span<const double> obs, double sigma, Rng& rng) {
    check(sigma >= 0.0, "add_observation_noise: sigma must be >= 0");
    std::vector<double> out(obs.begin(), obs.end());
    if (sigma == 0.0) return out;
    for (double& v : out) v += rng.normal(0.0, sigma);
    return out;
}

NoiseSpec tune_noise_levels(const NoiseTuneInput& input) {
    check(!input.sigma_grid.empty(), "tune_noise_levels: empty sigma grid");
    check(!input.returns.empty() && input.returns.size() == input.noiseless_returns.size(),
          "tune_noise_levels: one return row per policy required");
    const std::size_t n = input.sigma_grid.size();

    std::vector<double> mean_drop(n, 0.0);
    for (std::size_t p = 0; p < input.returns.size(); ++p) {
        check(input.returns[p].size() == n, "tune_noise_levels: return row length mismatch");
        const double base = input.noiseless_returns[p];
        const double denom = std::max(std::abs(base), 1e-12);
        for (std::size_t i = 0; i < n; ++i)
            mean_drop[i] += (base - input.returns[p][i]) / denom;
    }
    for (double& d : mean_drop) d /= static_cast<double>(input.returns.size());

    NoiseSpec spec;
    const double grid_min = input.sigma_grid.front();

    // medium: smallest sigma whose drop lands in the band
    std::size_t medium_idx = n;
    for (std::size_t i = 0; i < n; ++i) {
        if (mean_drop[i] >= 0.20 && mean_drop[i] <= 0.70) {
            medium_idx = i;
            break;
        }
    }
    if (medium_idx == n) {
        spec.medium = grid_min;
        spec.medium_flagged = true;
    } else {
        spec.medium = input.sigma_grid[medium_idx];
    }

    // low: largest sigma below medium that stays under a 5% drop
    spec.low = grid_min;
    spec.low_flagged = true;
    if (medium_idx != n) {
        for (std::size_t i = medium_idx; i-- > 0;) {
            if (mean_drop[i] < 0.05) {
                spec.low = input.sigma_grid[i];
                spec.low_flagged = false;
                break;
            }
        }
    }

    // high: smallest sigma past medium whose drop exceeds 90%
    spec.high = grid_min;
    spec.high_flagged = true;
    for (std::size_t i = medium_idx == n ? 0 : medium_idx + 1; i < n; ++i) {
        if (mean_drop[i] > 0.90) {
            spec.high = input.sigma_grid[i];
            spec.high_flagged = false;
            break;
        }
    }
    return spec;
}

}  // namespace lffrl
