#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lffrl/envs.hpp"

#include <cmath>

using namespace lffrl;

TEST_CASE("mountain car discrete dynamics match the hand-evaluated formula") {
    MountainCarState s{-0.5, 0.0};
    StepResult r = mc_step_discrete(s, 1);
    CHECK(s.velocity == doctest::Approx(-0.0025 * std::cos(-1.5)).epsilon(1e-15));
    CHECK(s.position == doctest::Approx(-0.5 + s.velocity).epsilon(1e-15));
    CHECK(r.reward == -1.0);
    CHECK_FALSE(r.done);
}

TEST_CASE("mountain car terminates at the goal boundary") {
    // just past the goal: every action keeps x' >= 0.5 within one step
    for (int a : {0, 1, 2}) {
        MountainCarState s{0.55, 0.0};
        CHECK(mc_step_discrete(s, a).done);
    }
    // at the boundary with forward throttle
    MountainCarState s{0.5, 0.0};
    CHECK(mc_step_discrete(s, 2).done);
}

TEST_CASE("mountain car rejects out-of-range actions") {
    MountainCarState s;
    CHECK_THROWS_AS(mc_step_discrete(s, 3), std::invalid_argument);
    CHECK_THROWS_AS(mc_step_discrete(s, -1), std::invalid_argument);
    CHECK_THROWS_AS(mc_step_continuous(s, 1.5), std::invalid_argument);
}

TEST_CASE("mountain car state bounds hold under random actions") {
    MountainCarContinuous env;
    Rng rng(3);
    env.reset(rng);
    for (int i = 0; i < 3000; ++i) {
        double a = rng.uniform(-1.0, 1.0);
        StepResult r = env.step(std::span<const double>{&a, 1});
        CHECK(env.state().position >= kMcPositionMin);
        CHECK(env.state().position <= kMcPositionMax);
        CHECK(std::abs(env.state().velocity) <= kMcVelocityMax);
        CHECK(r.reward == -1.0);
        if (r.done) env.reset(rng);
    }
}

TEST_CASE("mountain car returns live in [-horizon, -1]") {
    MountainCarContinuous env;
    Rng rng(4);
    for (int ep = 0; ep < 3; ++ep) {
        env.reset(rng);
        double ret = 0.0;
        bool done = false;
        int steps = 0;
        while (!done) {
            double a = rng.uniform(-1.0, 1.0);
            StepResult r = env.step(std::span<const double>{&a, 1});
            ret += r.reward;
            done = r.done;
            steps += 1;
        }
        CHECK(steps <= env.horizon());
        CHECK(ret >= -static_cast<double>(env.horizon()));
        CHECK(ret <= -1.0);
    }
}

TEST_CASE("pendulum equilibrium at upright") {
    PendulumSwingup env;
    env.set_state({0.0, 0.0});
    double a = 0.0;
    StepResult r = env.step(std::span<const double>{&a, 1});
    CHECK(r.reward == 0.0);
    CHECK(env.state().theta == 0.0);
    CHECK(env.state().omega == 0.0);
}

TEST_CASE("gravity accelerates the pendulum away from upright") {
    PendulumSwingup env;
    env.set_state({3.0 * M_PI / 4.0, 0.0});
    double a = 0.0;
    env.step(std::span<const double>{&a, 1});
    CHECK(env.state().omega > 0.0);  // falling toward theta = pi

    env.set_state({-3.0 * M_PI / 4.0, 0.0});
    env.step(std::span<const double>{&a, 1});
    CHECK(env.state().omega < 0.0);
}

TEST_CASE("pendulum energy stays bounded over a zero-torque rollout") {
    PendulumSwingup env;
    env.set_state({2.0, 0.0});
    double e0 = PendulumSwingup::energy(env.state());
    double worst = 0.0;
    double a = 0.0;
    for (int i = 0; i < 200; ++i) {
        env.step(std::span<const double>{&a, 1});
        worst = std::max(worst, std::abs(PendulumSwingup::energy(env.state()) - e0));
    }
    // semi-implicit Euler keeps the drift to a small oscillation
    CHECK(worst < 1.0);
}

TEST_CASE("pendulum clips out-of-range torque and counts a warning") {
    PendulumSwingup env;
    env.set_state({1.0, 0.0});
    double big = 7.0, max_t = 2.0;
    env.step(std::span<const double>{&big, 1});
    CHECK(env.clip_warnings() == 1);
    PendulumSwingup ref;
    ref.set_state({1.0, 0.0});
    ref.step(std::span<const double>{&max_t, 1});
    CHECK(env.state().theta == ref.state().theta);
    CHECK(env.state().omega == ref.state().omega);
}

TEST_CASE("pendulum state invariants") {
    PendulumSwingup env;
    Rng rng(5);
    env.reset(rng);
    for (int i = 0; i < 500; ++i) {
        double a = rng.uniform(-2.0, 2.0);
        StepResult r = env.step(std::span<const double>{&a, 1});
        CHECK(env.state().theta >= -M_PI);
        CHECK(env.state().theta < M_PI);
        CHECK(std::abs(env.state().omega) <= 8.0);
        REQUIRE(r.observation.size() == 3);
        CHECK(r.observation[0] == doctest::Approx(std::cos(env.state().theta)));
        if (r.done) env.reset(rng);
    }
}

TEST_CASE("observation noise") {
    std::vector<double> obs{1.0, -2.0, 0.5};
    SUBCASE("sigma 0 is the identity") {
        Rng rng(6);
        CHECK(add_observation_noise(obs, 0.0, rng) == obs);
    }
    SUBCASE("empirical std within 2% at sigma 0.25") {
        Rng rng(7);
        const int n = 100000;
        double sum = 0.0, sq = 0.0;
        for (int i = 0; i < n; ++i) {
            auto noisy = add_observation_noise(obs, 0.25, rng);
            double eps = noisy[1] - obs[1];
            sum += eps;
            sq += eps * eps;
        }
        double mean = sum / n;
        double std = std::sqrt(sq / n - mean * mean);
        CHECK(std == doctest::Approx(0.25).epsilon(0.02));
    }
    SUBCASE("same seed gives an identical perturbation sequence") {
        Rng a(8), b(8);
        for (int i = 0; i < 10; ++i)
            CHECK(add_observation_noise(obs, 0.5, a) == add_observation_noise(obs, 0.5, b));
    }
    SUBCASE("negative sigma rejected") {
        Rng rng(9);
        CHECK_THROWS_AS(add_observation_noise(obs, -0.1, rng), std::invalid_argument);
    }
}

TEST_CASE("noise level tuning bands") {
    std::vector<double> grid{0.01, 0.03, 0.1, 0.3, 1.0, 3.0};

    SUBCASE("graded degradation picks ordered levels") {
        NoiseTuneInput input;
        input.sigma_grid = grid;
        input.noiseless_returns = {100.0};
        input.returns = {{99.0, 96.0, 70.0, 40.0, 5.0, 2.0}};
        NoiseSpec spec = tune_noise_levels(input);
        CHECK(spec.low == 0.03);
        CHECK(spec.medium == 0.1);
        CHECK(spec.high == 1.0);
        CHECK_FALSE(spec.low_flagged);
        CHECK_FALSE(spec.medium_flagged);
        CHECK_FALSE(spec.high_flagged);
        CHECK(spec.low < spec.medium);
        CHECK(spec.medium < spec.high);
    }

    SUBCASE("untrained policy degenerates to the grid minimum, flagged") {
        NoiseTuneInput input;
        input.sigma_grid = grid;
        input.noiseless_returns = {-1000.0};
        input.returns = {{-1000.0, -1000.0, -1000.0, -1000.0, -1000.0, -1000.0}};
        NoiseSpec spec = tune_noise_levels(input);
        CHECK(spec.low == grid.front());
        CHECK(spec.medium == grid.front());
        CHECK(spec.high == grid.front());
        CHECK(spec.low_flagged);
        CHECK(spec.medium_flagged);
        CHECK(spec.high_flagged);
    }

    SUBCASE("noise-invariant policy cannot reach the high band") {
        NoiseTuneInput input;
        input.sigma_grid = grid;
        input.noiseless_returns = {100.0};
        input.returns = {{100.0, 98.0, 95.0, 60.0, 55.0, 50.0}};
        NoiseSpec spec = tune_noise_levels(input);
        CHECK_FALSE(spec.medium_flagged);
        CHECK(spec.high_flagged);
    }

    SUBCASE("mean drop averages across the policy pool") {
        NoiseTuneInput input;
        input.sigma_grid = {0.1, 1.0};
        input.noiseless_returns = {100.0, 200.0};
        input.returns = {{90.0, 20.0}, {180.0, 40.0}};  // drops 10%/80% for both
        NoiseSpec spec = tune_noise_levels(input);
        CHECK(spec.medium_flagged);  // nothing inside [20,70]
    }
}

TEST_CASE("env factory") {
    CHECK(make_env("pendulum")->name() == "pendulum");
    CHECK(make_env("mountain_car_continuous")->observation_dim() == 2);
    CHECK_THROWS_AS(make_env("walker-run"), std::invalid_argument);
}
