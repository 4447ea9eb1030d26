#include <doctest.h>

#include <cmath>
#include <random>

#include "scma/rng.hpp"
#include "scma/spectral.hpp"

using namespace scma;
using namespace scma::spectral;

namespace {

std::vector<cplx> random_complex(std::size_t n, std::uint64_t seed) {
    auto rng = make_substream(seed, 0);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<cplx> out(n);
    for (auto& v : out) v = cplx{unit(rng), unit(rng)};
    return out;
}

std::vector<double> random_real(std::size_t n, std::uint64_t seed) {
    auto rng = make_substream(seed, 1);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> out(n);
    for (auto& v : out) v = unit(rng);
    return out;
}

// reference O(N^2) circular convolution
std::vector<cplx> circular_direct(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    const std::size_t n = a.size();
    std::vector<cplx> out(n, cplx{});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) out[i] += a[k] * b[(i + n - k) % n];
    return out;
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_SUITE_BEGIN("spectral");

TEST_CASE("delta and constant sequences") {
    std::vector<cplx> delta(4, cplx{});
    delta[0] = cplx{1.0, 0.0};
    const auto sp = dft_forward(delta);
    for (const auto& v : sp) {
        CHECK(v.real() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(v.imag() == doctest::Approx(0.0).epsilon(1e-14));
    }

    const std::size_t n = 16;
    const auto dc = dft_forward(std::vector<cplx>(n, cplx{1.0, 0.0}));
    CHECK(dc[0].real() == doctest::Approx(static_cast<double>(n)));
    for (std::size_t i = 1; i < n; ++i) CHECK(std::abs(dc[i]) < 1e-12);
}

TEST_CASE("round trip within 1e-12 relative") {
    const auto x = random_complex(512, 3);
    const auto back = dft_inverse(dft_forward(x));
    double scale = 0.0;
    for (const auto& v : x) scale = std::max(scale, std::abs(v));
    CHECK(max_abs_diff(x, back) < 1e-12 * scale);
}

TEST_CASE("transform linearity") {
    const auto a = random_complex(128, 4);
    const auto b = random_complex(128, 5);
    const cplx alpha{0.7, -0.3}, beta{-1.2, 0.5};
    std::vector<cplx> mix(128);
    for (std::size_t i = 0; i < 128; ++i) mix[i] = alpha * a[i] + beta * b[i];
    const auto fm = dft_forward(mix);
    const auto fa = dft_forward(a);
    const auto fb = dft_forward(b);
    for (std::size_t i = 0; i < 128; ++i)
        CHECK(std::abs(fm[i] - (alpha * fa[i] + beta * fb[i])) < 1e-12 * 256);
}

TEST_CASE("Parseval") {
    const auto x = random_complex(256, 6);
    const auto sp = dft_forward(x);
    double time_e = 0.0, freq_e = 0.0;
    for (const auto& v : x) time_e += std::norm(v);
    for (const auto& v : sp) freq_e += std::norm(v);
    CHECK(freq_e / 256.0 == doctest::Approx(time_e).epsilon(1e-10));
}

TEST_CASE("non-power-of-two lengths are rejected") {
    CHECK_THROWS_AS(static_cast<void>(dft_forward(std::vector<cplx>(3))), std::invalid_argument);
    CHECK_THROWS_AS(static_cast<void>(dft_forward(std::vector<cplx>(1))), std::invalid_argument);
    CHECK_THROWS_AS(static_cast<void>(circular_convolve(std::vector<cplx>(5), std::vector<cplx>(5))),
                    std::invalid_argument);
}

TEST_CASE("circular convolution: identity and shift") {
    const auto b = random_complex(64, 7);
    std::vector<cplx> delta0(64, cplx{});
    delta0[0] = cplx{1.0, 0.0};
    CHECK(max_abs_diff(circular_convolve(delta0, b), b) < 1e-13);

    std::vector<cplx> delta3(64, cplx{});
    delta3[3] = cplx{1.0, 0.0};
    const auto shifted = circular_convolve(delta3, b);
    for (std::size_t i = 0; i < 64; ++i)
        CHECK(std::abs(shifted[(i + 3) % 64] - b[i]) < 1e-13);
}

TEST_CASE("circular convolution matches the direct sum") {
    const auto a = random_complex(256, 8);
    const auto b = random_complex(256, 9);
    CHECK(max_abs_diff(circular_convolve(a, b), circular_direct(a, b)) < 1e-10);

    CHECK_THROWS_AS(static_cast<void>(circular_convolve(a, random_complex(128, 10))),
                    std::invalid_argument);
}

TEST_CASE("linear convolution basics") {
    CHECK(linear_convolve_direct(std::vector<double>{1.0}, {3.0, -2.0}) ==
          std::vector<double>{3.0, -2.0});
    CHECK(linear_convolve_direct(std::vector<double>{1.0, 1.0}, {1.0, 1.0}) ==
          std::vector<double>{1.0, 2.0, 1.0});
}

TEST_CASE("zero-padded circular equals linear on all lengths 4..1024") {
    for (std::size_t n = 4; n <= 1024; n <<= 1) {
        const auto a = random_real(n / 2, 20 + n);
        const auto b = random_real(n / 2, 21 + n);
        std::vector<double> pa(n, 0.0), pb(n, 0.0);
        std::copy(a.begin(), a.end(), pa.begin());
        std::copy(b.begin(), b.end(), pb.begin());
        const auto circ = circular_convolve(pa, pb);
        const auto lin = linear_convolve_direct(a, b);
        for (std::size_t i = 0; i < lin.size(); ++i)
            CHECK(std::abs(circ[i] - lin[i]) < 1e-10);
        for (std::size_t i = lin.size(); i < n; ++i) CHECK(std::abs(circ[i]) < 1e-10);
    }
}

TEST_CASE("real-input transform agrees with the complex path") {
    for (std::size_t n : {std::size_t{2}, std::size_t{8}, std::size_t{512}}) {
        const auto x = random_real(n, 30 + n);
        std::vector<double> sr(n / 2 + 1), si(n / 2 + 1);
        rfft(x.data(), n, sr.data(), si.data());

        std::vector<cplx> xc(n);
        for (std::size_t i = 0; i < n; ++i) xc[i] = cplx{x[i], 0.0};
        const auto ref = dft_forward(xc);
        for (std::size_t k = 0; k <= n / 2; ++k) {
            CHECK(sr[k] == doctest::Approx(ref[k].real()).epsilon(1e-12).scale(1.0));
            CHECK(si[k] == doctest::Approx(ref[k].imag()).epsilon(1e-12).scale(1.0));
        }

        std::vector<double> back(n);
        irfft(sr.data(), si.data(), n, back.data());
        for (std::size_t i = 0; i < n; ++i)
            CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("2-D round trip and delta") {
    const std::size_t side = 16;
    const auto x = random_complex(side * side, 40);
    const auto back = dft_inverse_2d(dft_forward_2d(x, side), side);
    CHECK(max_abs_diff(x, back) < 1e-12 * 16);

    std::vector<cplx> delta(side * side, cplx{});
    delta[0] = cplx{1.0, 0.0};
    const auto sp = dft_forward_2d(delta, side);
    for (const auto& v : sp) CHECK(std::abs(v - cplx{1.0, 0.0}) < 1e-13);
}

TEST_CASE("2-D convolution theorem on a small grid") {
    const std::size_t side = 8;
    const auto a = random_complex(side * side, 41);
    const auto b = random_complex(side * side, 42);
    auto fa = dft_forward_2d(a, side);
    const auto fb = dft_forward_2d(b, side);
    for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= fb[i];
    const auto conv = dft_inverse_2d(fa, side);

    // direct 2-D circular sum
    for (std::size_t r = 0; r < side; ++r)
        for (std::size_t c = 0; c < side; ++c) {
            cplx sum{};
            for (std::size_t i = 0; i < side; ++i)
                for (std::size_t k = 0; k < side; ++k)
                    sum += a[i * side + k] *
                           b[((r + side - i) % side) * side + ((c + side - k) % side)];
            CHECK(std::abs(conv[r * side + c] - sum) < 1e-10);
        }
}

TEST_SUITE_END();
