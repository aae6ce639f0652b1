#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lffrl/diagnostics.hpp"
#include "lffrl/fourier.hpp"
#include "testutil.hpp"

#include <cmath>

using namespace lffrl;

TEST_CASE("lff init hits the target weight std") {
    SUBCASE("beta=1, d=10") {
        FourierSpec spec{Variant::LFF, 1.0, 10, 40, {}};
        Rng rng(1);
        LinearLayer layer = build_lff_layer(spec, rng);
        CHECK(layer.out_dim() == 400);
        CHECK(layer.activation == Activation::Sin);
        BetaEstimate est = estimate_beta(layer, 10);
        CHECK(est.sigma_hat == doctest::Approx(M_PI / 10.0).epsilon(0.05));
    }
    SUBCASE("warmup setting beta=10/pi, d=2 gives std 5") {
        FourierSpec spec{Variant::LFF, 10.0 / M_PI, 2, 400, {}};
        Rng rng(2);
        LinearLayer layer = build_lff_layer(spec, rng);
        BetaEstimate est = estimate_beta(layer, 2);
        CHECK(est.sigma_hat == doctest::Approx(5.0).epsilon(0.08));
    }
    SUBCASE("a million samples land within 1%") {
        // 33334 rows x 30 cols >= 1e6 weights
        FourierSpec spec{Variant::LFF, 0.05, 30, 33334 / 30, {}};
        Rng rng(3);
        LinearLayer layer = build_lff_layer(spec, rng);
        CHECK(layer.weights.size() >= 999000);
        BetaEstimate est = estimate_beta(layer, 30);
        CHECK(est.sigma_hat == doctest::Approx(M_PI * 0.05 / 30.0).epsilon(0.01));
    }
}

TEST_CASE("lff biases are uniform phases in [-pi, pi]") {
    FourierSpec spec{Variant::LFF, 0.5, 5, 200, {}};
    Rng rng(4);
    LinearLayer layer = build_lff_layer(spec, rng);
    double lo = 1e9, hi = -1e9, mean = 0.0;
    for (double b : layer.biases) {
        lo = std::min(lo, b);
        hi = std::max(hi, b);
        mean += b;
    }
    mean /= layer.biases.size();
    CHECK(lo >= -M_PI);
    CHECK(hi <= M_PI);
    CHECK(lo < -0.9 * M_PI);
    CHECK(hi > 0.9 * M_PI);
    CHECK(std::abs(mean) < 0.15);
}

TEST_CASE("beta <= 0 is rejected") {
    Rng rng(5);
    FourierSpec bad{Variant::LFF, 0.0, 4, 40, {}};
    CHECK_THROWS_AS(build_lff_layer(bad, rng), std::invalid_argument);
    bad.variant = Variant::CLFF;
    bad.beta = -1.0;
    CHECK_THROWS_AS(build_clff_layer(bad, rng), std::invalid_argument);
}

TEST_CASE("clff layer output is (sin(Wx), cos(Wx), x)") {
    SUBCASE("forced single weight") {
        Mlp net;
        net.clff_first = true;
        LinearLayer l = make_layer(1, 1, Activation::Sin, false);
        l.weights(0, 0) = M_PI / 2.0;
        net.layers.push_back(std::move(l));
        Matrix x(1, 1, {1.0});
        Matrix out = forward(net, x).output();
        REQUIRE(out.cols == 3);
        CHECK(out(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(out(0, 1) == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(out(0, 2) == 1.0);
    }
    SUBCASE("zero input gives sin 0, cos 1, x 0") {
        FourierSpec spec{Variant::CLFF, 1.0, 3, 9, {}};
        Rng rng(6);
        Mlp net;
        net.clff_first = true;
        net.layers.push_back(build_clff_layer(spec, rng));
        std::size_t k = net.layers[0].out_dim();
        Matrix x(1, 3);
        Matrix out = forward(net, x).output();
        for (std::size_t j = 0; j < k; ++j) {
            CHECK(out(0, j) == 0.0);
            CHECK(out(0, k + j) == 1.0);
        }
        for (std::size_t j = 0; j < 3; ++j) CHECK(out(0, 2 * k + j) == 0.0);
    }
    SUBCASE("random layer matches element-wise recomputation") {
        FourierSpec spec{Variant::CLFF, 0.7, 4, 10, {}};
        Rng rng(7);
        Mlp net;
        net.clff_first = true;
        net.layers.push_back(build_clff_layer(spec, rng));
        Matrix x = testutil::random_matrix(6, 4, rng);
        Matrix got = forward(net, x).output();
        Matrix want = testutil::scalar_forward(net, x);
        for (std::size_t i = 0; i < got.size(); ++i)
            CHECK(got.data[i] == doctest::Approx(want.data[i]).epsilon(1e-12));
    }
}

TEST_CASE("clff keeps the raw input as an exact suffix slice") {
    FourierSpec spec{Variant::CLFF, 0.3, 5, 12, {8}};
    Rng rng(8);
    Mlp net = build_critic(spec, rng);
    Matrix x = testutil::random_matrix(7, 5, rng, 2.5);
    ForwardCache cache = forward(net, x);
    const Matrix& first = cache.post[0];
    std::size_t k = net.layers[0].out_dim();
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = 0; j < 5; ++j) CHECK(first(i, 2 * k + j) == x(i, j));
}

TEST_CASE("clff has no bias and matches the lff total width") {
    FourierSpec spec{Variant::CLFF, 0.5, 4, 40, {16}};
    Rng rng(9);
    Mlp net = build_critic(spec, rng);
    CHECK_FALSE(net.layers[0].use_bias);
    CHECK(net.layers[0].biases.empty());
    // lff total width would be 160; sin||cos||x = 2*78+4 = 160
    CHECK(2 * net.layers[0].out_dim() + 4 == 160);
}

TEST_CASE("estimate_beta") {
    SUBCASE("all-zero weights give beta_hat 0") {
        LinearLayer l = make_layer(8, 4, Activation::Sin);
        CHECK(estimate_beta(l, 4).beta_hat == 0.0);
    }
    SUBCASE("exact std 2*pi/30 with d=30 inverts to beta=2") {
        LinearLayer l = make_layer(2, 30, Activation::Sin);
        // two-point distribution with population std exactly 2*pi/30
        for (std::size_t j = 0; j < 30; ++j) {
            l.weights(0, j) = 2.0 * M_PI / 30.0;
            l.weights(1, j) = -2.0 * M_PI / 30.0;
        }
        BetaEstimate est = estimate_beta(l, 30);
        CHECK(est.beta_hat == doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("empty weight matrix is rejected") {
        LinearLayer empty;
        CHECK_THROWS_AS(estimate_beta(empty, 3), std::invalid_argument);
    }
    SUBCASE("round-trip across the sweep grid") {
        for (double beta : {1e-3, 1e-2, 1e-1, 1.0, std::pow(10.0, 0.5)}) {
            FourierSpec spec{Variant::LFF, beta, 30, 3400, {}};  // >= 1e5 weights
            Rng rng(10);
            LinearLayer layer = build_lff_layer(spec, rng);
            BetaEstimate est = estimate_beta(layer, 30);
            CHECK(est.beta_hat == doctest::Approx(beta).epsilon(0.05));
        }
    }
}

TEST_CASE("sigma to beta conversion") {
    CHECK(li_sigma_to_beta(0.05, 30) == 3.0);
    CHECK(li_sigma_to_beta(0.0, 12) == 0.0);
    CHECK(li_sigma_to_beta(1.0, 1) == 2.0);
    CHECK_THROWS_AS(li_sigma_to_beta(-0.1, 3), std::invalid_argument);
}

TEST_CASE("scaling first-layer weights raises representation frequency") {
    FourierSpec spec{Variant::LFF, 0.2, 4, 20, {}};
    Rng rng(11);
    LinearLayer layer = build_lff_layer(spec, rng);
    Matrix data = testutil::random_matrix(32, 4, rng);

    LinearLayer scaled = layer;
    for (double& w : scaled.weights.data) w *= 2.0;  // power of two: exact

    auto f1 = representation_frequency(layer.weights, data);
    auto f2 = representation_frequency(scaled.weights, data);
    for (std::size_t i = 0; i < f1.size(); ++i) CHECK(f2[i] >= f1[i]);
}

TEST_CASE("critic architectures have the right shape") {
    Rng rng(12);
    FourierSpec lff{Variant::LFF, 0.1, 4, 40, {64, 64}};
    Mlp critic = build_critic(lff, rng);
    REQUIRE(critic.layers.size() == 4);
    CHECK(critic.layers[0].out_dim() == 160);
    CHECK(critic.output_dim() == 1);

    FourierSpec relu{Variant::ReLU, 0.1, 4, 40, {64, 64}};
    Mlp rc = build_critic(relu, rng);
    CHECK(rc.layers[0].activation == Activation::ReLU);
    CHECK(rc.layers[0].out_dim() == 160);
}
