#include <doctest.h>

#include <cmath>

#include "scma/channel.hpp"
#include "scma/rng.hpp"
#include "support.hpp"

using namespace scma;

TEST_SUITE_BEGIN("channel");

TEST_CASE("encode maps big-endian bit groups") {
    const Codebook cb = generate_separable_codebook(4, 16, 1);  // J=6, 4 bits each
    std::vector<std::uint8_t> bits(24, 0);
    auto set_layer = [&](int j, std::initializer_list<int> b) {
        int i = 0;
        for (int v : b) bits[4 * j + i++] = static_cast<std::uint8_t>(v);
    };
    set_layer(0, {0, 0, 0, 0});
    set_layer(1, {1, 1, 1, 1});
    set_layer(2, {0, 1, 0, 1});
    const auto idx = encode(bits, cb);
    CHECK(idx[0] == 0);
    CHECK(idx[1] == 15);
    CHECK(idx[2] == 5);

    bits.pop_back();
    CHECK_THROWS_AS(static_cast<void>(encode(bits, cb)), std::invalid_argument);
}

TEST_CASE("superpose equals the per-layer sum") {
    const Codebook cb = generate_separable_codebook(4, 16, 2);
    const std::vector<int> indices = {3, 7, 0, 15, 9, 4};
    const ReceivedSignal y = superpose(indices, cb);
    for (int k = 0; k < cb.num_resources; ++k) {
        cplx sum{};
        for (int j = 0; j < cb.num_layers; ++j) sum += cb.entry(j, indices[j], k);
        CHECK(y[k] == sum);
    }
    CHECK_THROWS_AS(static_cast<void>(superpose({1, 2}, cb)), std::invalid_argument);
}

TEST_CASE("transmit with zero noise is the exact superposition") {
    const Codebook cb = generate_separable_codebook(4, 16, 3);
    const std::vector<int> indices = {1, 2, 3, 4, 5, 6};
    auto rng = make_substream(5, 0);
    const NoiseModel off{0.0, 5.0};
    CHECK(transmit(indices, cb, off, rng) == superpose(indices, cb));
}

TEST_CASE("transmit is deterministic for a fixed substream") {
    const Codebook cb = generate_separable_codebook(4, 16, 3);
    const std::vector<int> indices = {0, 1, 2, 3, 4, 5};
    const NoiseModel noise{0.02, 5.0};
    auto r1 = make_substream(42, 7);
    auto r2 = make_substream(42, 7);
    CHECK(transmit(indices, cb, noise, r1) == transmit(indices, cb, noise, r2));
    auto r3 = make_substream(42, 8);
    CHECK(transmit(indices, cb, noise, r3) != transmit(indices, cb, noise, r1));
}

TEST_CASE("noise statistics match CN(0, N0)") {
    const Codebook cb = test::make_single_layer_codebook({cplx{0.5, -0.25}, cplx{-0.5, 0.25}});
    const NoiseModel noise{0.02, 5.0};
    const std::vector<int> indices = {0};
    const int draws = 100000;

    cplx mean0{};
    double var_re = 0.0;
    auto rng = make_substream(1234, 0);
    for (int t = 0; t < draws; ++t) {
        const auto y = transmit(indices, cb, noise, rng);
        mean0 += y[0];
        const double n_re = y[0].real() - 0.5;
        var_re += n_re * n_re;
    }
    mean0 /= static_cast<double>(draws);
    var_re /= static_cast<double>(draws);

    // mean within 5 standard errors per component
    const double se = 5.0 * std::sqrt(noise.sigma2() / draws);
    CHECK(std::abs(mean0.real() - 0.5) < se);
    CHECK(std::abs(mean0.imag() + 0.25) < se);
    // per-dimension variance within 5%
    CHECK(var_re == doctest::Approx(noise.sigma2()).epsilon(0.05));
}

TEST_CASE("noise model validation") {
    const NoiseModel good{0.2, 5.0};
    CHECK_NOTHROW(good.validate());
    CHECK(good.truncation_ratio() < 1e-12);
    const NoiseModel negative{-1.0, 5.0};
    CHECK_THROWS_AS(negative.validate(), std::invalid_argument);
    const NoiseModel no_width{0.2, 0.0};
    CHECK_THROWS_AS(no_width.validate(), std::invalid_argument);
    // density at the truncation edge not negligible
    const NoiseModel loud{2.0, 5.0};
    CHECK_THROWS_AS(loud.validate(), std::invalid_argument);
}

TEST_SUITE_END();
