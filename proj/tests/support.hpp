#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "scma/codebook.hpp"
#include "scma/factor_graph.hpp"
#include "scma/rng.hpp"

namespace scma::test {

// Separable codebook whose components are exact grid multiples:
// per layer and support position, draws distinct values from
// {-wid_steps*step, ..., 0, ..., +wid_steps*step}. Used wherever an
// exactly-representable, small-amplitude codebook keeps per-entry relative
// comparisons inside double-precision range.
inline Codebook make_grid_codebook(int num_resources, int num_codewords, double step,
                                   long wid_steps, std::uint64_t seed) {
    int side = 1;
    while (side * side < num_codewords) ++side;
    const int rc = side * side == num_codewords ? side : num_codewords;  // fall back: rc x 1

    Codebook cb;
    cb.num_resources = num_resources;
    cb.num_layers = num_resources * (num_resources - 1) / 2;
    cb.num_codewords = num_codewords;
    cb.num_nonzero = 2;
    cb.entries.assign(
        static_cast<std::size_t>(cb.num_layers) * cb.num_codewords * cb.num_resources, cplx{});

    std::vector<double> candidates;
    for (long t = -wid_steps; t <= wid_steps; ++t) candidates.push_back(t * step);

    auto rng = make_substream(seed, 0xC0DEB00C);
    auto draw = [&](int count) {
        std::vector<double> pool = candidates;
        std::shuffle(pool.begin(), pool.end(), rng);
        pool.resize(count);
        return pool;
    };

    const int qc = num_codewords / rc;
    int layer = 0;
    for (int a = 0; a < num_resources; ++a)
        for (int b = a + 1; b < num_resources; ++b, ++layer) {
            const int pos[2] = {a, b};
            for (int p = 0; p < 2; ++p) {
                const auto re = draw(rc);
                const auto im = draw(qc);
                for (int r = 0; r < rc; ++r)
                    for (int q = 0; q < qc; ++q)
                        cb.entry(layer, r * qc + q, pos[p]) = cplx{re[r], im[q]};
            }
        }
    return cb;
}

// Single-layer codebook over two resources; entries[m] used on both.
inline Codebook make_single_layer_codebook(const std::vector<cplx>& codewords) {
    Codebook cb;
    cb.num_resources = 2;
    cb.num_layers = 1;
    cb.num_codewords = static_cast<int>(codewords.size());
    cb.num_nonzero = 2;
    cb.entries.resize(static_cast<std::size_t>(2) * codewords.size());
    for (int m = 0; m < cb.num_codewords; ++m) {
        cb.entry(0, m, 0) = codewords[m];
        cb.entry(0, m, 1) = codewords[m];
    }
    return cb;
}

inline std::vector<std::uint8_t> random_bits(std::mt19937_64& rng, int count) {
    std::uniform_int_distribution<int> bit(0, 1);
    std::vector<std::uint8_t> bits(count);
    for (auto& b : bits) b = static_cast<std::uint8_t>(bit(rng));
    return bits;
}

inline int log2_int(int m) {
    int b = 0;
    while ((1 << b) < m) ++b;
    return b;
}

}  // namespace scma::test
