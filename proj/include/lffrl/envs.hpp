#pragma once

#include "lffrl/rng.hpp"

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace lffrl {

struct StepResult {
    std::vector<double> observation;
    double reward = 0.0;
    bool done = false;       // episode over (terminal state or horizon)
    bool truncated = false;  // horizon cut, not a true terminal
};

/// Episodic continuous-control environment. Instances own no RNG; reset takes
/// the caller's env stream so runs replay deterministically.
class Env {
public:
    virtual ~Env() = default;
    virtual std::vector<double> reset(Rng& rng) = 0;
    virtual StepResult step(std::span<const double> action) = 0;
    virtual int observation_dim() const = 0;
    virtual int action_dim() const = 0;
    virtual int horizon() const = 0;
    virtual std::string name() const = 0;
    virtual std::unique_ptr<Env> clone_fresh() const = 0;
};

std::unique_ptr<Env> make_env(const std::string& name);

struct MountainCarState {
    double position = -0.5;
    double velocity = 0.0;
};

/// Classical mountain car, continuous throttle in [-1, 1].
/// v' = clip(v + 0.0015*a - 0.0025*cos(3x)), x' = clip(x + v'); -1 per step,
/// done at x' >= 0.5, horizon 1000.
class MountainCarContinuous final : public Env {
public:
    std::vector<double> reset(Rng& rng) override;
    StepResult step(std::span<const double> action) override;
    int observation_dim() const override { return 2; }
    int action_dim() const override { return 1; }
    int horizon() const override { return 1000; }
    std::string name() const override { return "mountain_car_continuous"; }
    std::unique_ptr<Env> clone_fresh() const override {
        return std::make_unique<MountainCarContinuous>();
    }

    const MountainCarState& state() const { return state_; }
    void set_state(const MountainCarState& s) { state_ = s; steps_ = 0; }

private:
    MountainCarState state_;
    int steps_ = 0;
};

/// Discrete 3-action variant used by the dynamic-programming oracle.
/// v' = clip(v + 0.001*(a-1) - 0.0025*cos(3x)).
StepResult mc_step_discrete(MountainCarState& state, int action);
/// One continuous-throttle transition without episode bookkeeping.
StepResult mc_step_continuous(MountainCarState& state, double action);

inline constexpr double kMcPositionMin = -1.2;
inline constexpr double kMcPositionMax = 0.6;
inline constexpr double kMcVelocityMax = 0.07;
inline constexpr double kMcGoalPosition = 0.5;

struct PendulumState {
    double theta = 0.0;  // 0 = upright, wrapped to [-pi, pi)
    double omega = 0.0;  // clipped to [-8, 8]
};

/// Torque-limited swing-up: g=10, m=1, l=1, dt=0.05, reward
/// -(theta^2 + 0.1*omega^2 + 0.001*torque^2), horizon 200. Out-of-range
/// torque is clipped (counted in clip_warnings).
class PendulumSwingup final : public Env {
public:
    std::vector<double> reset(Rng& rng) override;
    StepResult step(std::span<const double> action) override;
    int observation_dim() const override { return 3; }
    int action_dim() const override { return 1; }
    int horizon() const override { return 200; }
    std::string name() const override { return "pendulum"; }
    std::unique_ptr<Env> clone_fresh() const override {
        return std::make_unique<PendulumSwingup>();
    }

    const PendulumState& state() const { return state_; }
    void set_state(const PendulumState& s) { state_ = s; steps_ = 0; }
    long clip_warnings() const { return clip_warnings_; }

    static double energy(const PendulumState& s);

private:
    std::vector<double> observe() const;
    PendulumState state_;
    int steps_ = 0;
    long clip_warnings_ = 0;
};

/// Test-time observation perturbation: obs + eps, eps ~ N(0, sigma^2 I).
/// Never applied to observations entering the replay buffer.
std::vector<double> add_observation_noise(std::span<const double> obs, double sigma, Rng& rng);

struct NoiseSpec {
    double low = 0.0;
    double medium = 0.0;
    double high = 0.0;
    bool low_flagged = false;
    bool medium_flagged = false;
    bool high_flagged = false;
};

/// Mean episodic return of a deterministic policy under observation noise.
using NoisyPolicyReturn = double (*)(void*, Env&, double sigma, Rng&);

/// Searches a fixed log grid of sigmas for the three disruption bands:
/// low  = largest sigma whose mean return drop stays under 5%,
/// medium = smallest sigma whose drop lands in [20%, 70%],
/// high = smallest sigma whose drop exceeds 90%,
/// where drop is relative to the noiseless return. A band with no qualifying
/// grid point reports the grid minimum and is flagged.
struct NoiseTuneInput {
    std::vector<double> sigma_grid;          // ascending
    std::vector<std::vector<double>> returns;  // per policy, per grid sigma
    std::vector<double> noiseless_returns;     // per policy
};
NoiseSpec tune_noise_levels(const NoiseTuneInput& input);

}  // namespace lffrl
