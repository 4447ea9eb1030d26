#include <doctest.h>

#include <cmath>
#include <numbers>

#include "scma/channel.hpp"
#include "scma/factor_graph.hpp"
#include "scma/mpa.hpp"
#include "scma/rng.hpp"
#include "support.hpp"

using namespace scma;

namespace {

double complex_density(cplx d, double n0) {
    return std::exp(-std::norm(d) / n0) / (std::numbers::pi * n0);
}

// exhaustive MAP over all M^J joint hypotheses
std::vector<int> brute_force_map(const ReceivedSignal& y, const Codebook& cb, double n0) {
    std::vector<int> joint(cb.num_layers, 0), best;
    double best_metric = -1.0;
    for (;;) {
        double metric = 1.0;
        for (int k = 0; k < cb.num_resources; ++k) {
            cplx sum{};
            for (int j = 0; j < cb.num_layers; ++j) sum += cb.entry(j, joint[j], k);
            metric *= complex_density(y[k] - sum, n0);
        }
        if (metric > best_metric) {
            best_metric = metric;
            best = joint;
        }
        int j = cb.num_layers - 1;
        while (j >= 0 && ++joint[j] == cb.num_codewords) joint[j--] = 0;
        if (j < 0) break;
    }
    return best;
}

}  // namespace

TEST_SUITE_BEGIN("mpa");

TEST_CASE("init_messages is uniform") {
    const FactorGraph g = build_regular_graph(4);
    const MessageSet m16 = init_messages(g, 16);
    for (double v : m16.v) CHECK(v == 0.0625);
    for (double u : m16.u) CHECK(u == 0.0);
    const MessageSet m2 = init_messages(g, 2);
    for (double v : m2.v) CHECK(v == 0.5);
    for (int e = 0; e < g.num_edges; ++e) {
        double sum = 0.0;
        for (int m = 0; m < 16; ++m) sum += m16.v_at(e)[m];
        CHECK(sum == 1.0);
    }
}

TEST_CASE("resource update, degree-1 resource") {
    const Codebook cb =
        test::make_single_layer_codebook({cplx{0.5, -0.25}, cplx{-0.5, 0.25}});
    const FactorGraph g = from_codebook(cb);
    const NoiseModel noise{0.1, 5.0};
    const ReceivedSignal y = {cplx{0.3, 0.1}, cplx{-0.2, 0.0}};

    MessageSet msgs = init_messages(g, 2);
    update_resource_messages(msgs, y, cb, noise, g);
    for (int k = 0; k < 2; ++k)
        for (int m = 0; m < 2; ++m) {
            const double expect = complex_density(y[k] - cb.entry(0, m, k), noise.n0);
            CHECK(msgs.u_at(g.edge(0, k))[m] == doctest::Approx(expect).epsilon(1e-12));
        }
}

TEST_CASE("resource update, two layers with M=2 against hand enumeration") {
    // two layers on both of two resources
    Codebook cb;
    cb.num_resources = 2;
    cb.num_layers = 2;
    cb.num_codewords = 2;
    cb.num_nonzero = 2;
    cb.entries.resize(8);
    const cplx a0{0.4, 0.1}, a1{-0.4, -0.1}, b0{0.2, -0.3}, b1{-0.2, 0.3};
    for (int k = 0; k < 2; ++k) {
        cb.entry(0, 0, k) = a0;
        cb.entry(0, 1, k) = a1;
        cb.entry(1, 0, k) = b0;
        cb.entry(1, 1, k) = b1;
    }
    const FactorGraph g = from_codebook(cb);
    const NoiseModel noise{0.05, 5.0};
    const ReceivedSignal y = {cplx{0.35, -0.2}, cplx{-0.1, 0.15}};

    MessageSet msgs = init_messages(g, 2);
    // non-uniform prior on layer 1 at resource 0
    msgs.v_at(g.edge(1, 0))[0] = 0.7;
    msgs.v_at(g.edge(1, 0))[1] = 0.3;
    update_resource_messages(msgs, y, cb, noise, g);

    for (int m = 0; m < 2; ++m) {
        const cplx xm = cb.entry(0, m, 0);
        const double expect = 0.7 * complex_density(y[0] - xm - b0, noise.n0) +
                              0.3 * complex_density(y[0] - xm - b1, noise.n0);
        CHECK(msgs.u_at(g.edge(0, 0))[m] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("resource update symmetry under sign flip") {
    Codebook cb;
    cb.num_resources = 2;
    cb.num_layers = 2;
    cb.num_codewords = 2;
    cb.num_nonzero = 2;
    cb.entries.resize(8);
    const cplx c{0.45, -0.15};
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
            cb.entry(j, 0, k) = c;
            cb.entry(j, 1, k) = -c;
        }
    const FactorGraph g = from_codebook(cb);
    const NoiseModel noise{0.1, 5.0};
    MessageSet msgs = init_messages(g, 2);
    update_resource_messages(msgs, {cplx{}, cplx{}}, cb, noise, g);
    for (int e = 0; e < g.num_edges; ++e)
        CHECK(msgs.u_at(e)[0] == doctest::Approx(msgs.u_at(e)[1]).epsilon(1e-14));
}

TEST_CASE("layer update products and normalization") {
    SUBCASE("degree-2 layer forwards the normalized other-resource message") {
        const Codebook cb =
            test::make_single_layer_codebook({cplx{0.5, 0.0}, cplx{-0.5, 0.0}});
        const FactorGraph g = from_codebook(cb);
        MessageSet msgs = init_messages(g, 2);
        msgs.u_at(g.edge(0, 1))[0] = 0.3;
        msgs.u_at(g.edge(0, 1))[1] = 0.1;
        update_layer_messages(msgs, g);
        CHECK(msgs.v_at(g.edge(0, 0))[0] == doctest::Approx(0.75));
        CHECK(msgs.v_at(g.edge(0, 0))[1] == doctest::Approx(0.25));
    }
    SUBCASE("degree-3 hand case") {
        // one layer on three resources
        const FactorGraph g = graph_from_adjacency(3, {{0, 1, 2}});
        MessageSet msgs = init_messages(g, 2);
        msgs.u_at(g.edge(0, 0))[0] = 0.2;
        msgs.u_at(g.edge(0, 0))[1] = 0.8;
        msgs.u_at(g.edge(0, 1))[0] = 0.5;
        msgs.u_at(g.edge(0, 1))[1] = 0.5;
        update_layer_messages(msgs, g);
        CHECK(msgs.v_at(g.edge(0, 2))[0] == doctest::Approx(0.2));
        CHECK(msgs.v_at(g.edge(0, 2))[1] == doctest::Approx(0.8));
    }
    SUBCASE("scaling all U vectors leaves normalized V unchanged") {
        const Codebook cb = generate_separable_codebook(4, 16, 2);
        const FactorGraph g = from_codebook(cb);
        const NoiseModel noise{0.05, 5.0};
        auto rng = make_substream(3, 0);
        const int nbits = 4 * cb.num_layers;
        const auto y = transmit(encode(test::random_bits(rng, nbits), cb), cb, noise, rng);

        MessageSet msgs = init_messages(g, 16);
        update_resource_messages(msgs, y, cb, noise, g);
        MessageSet scaled = msgs;
        for (double& u : scaled.u) u *= 37.5;
        update_layer_messages(msgs, g);
        update_layer_messages(scaled, g);
        for (std::size_t i = 0; i < msgs.v.size(); ++i)
            CHECK(scaled.v[i] == doctest::Approx(msgs.v[i]).epsilon(1e-12));
    }
    SUBCASE("total underflow is replaced by uniform and counted") {
        const FactorGraph g = graph_from_adjacency(3, {{0, 1, 2}});
        MessageSet msgs = init_messages(g, 2);
        for (double& u : msgs.u) u = 1e-200;  // product of two underflows to ~1e-400
        update_layer_messages(msgs, g);
        CHECK(msgs.underflow_replacements == 3);
        for (int e = 0; e < g.num_edges; ++e) CHECK(msgs.v_at(e)[0] == 0.5);
    }
}

TEST_CASE("decide breaks ties toward the lowest index") {
    const FactorGraph g = graph_from_adjacency(2, {{0, 1}});
    MessageSet msgs = init_messages(g, 4);
    for (int k = 0; k < 2; ++k) {
        double* u = msgs.u_at(g.edge(0, k));
        u[0] = 0.2;
        u[1] = 0.5;
        u[2] = 0.5;
        u[3] = 0.1;
    }
    const DetectionResult res = decide(msgs, g);
    CHECK(res.decided[0] == 1);  // scores 0.04, 0.25, 0.25, 0.01
    CHECK(res.scores[0][1] == res.scores[0][2]);
}

TEST_CASE("decide: single layer, one iteration, noiseless") {
    const Codebook cb =
        test::make_single_layer_codebook({cplx{0.5, -0.25}, cplx{-0.5, 0.25}});
    const FactorGraph g = from_codebook(cb);
    const NoiseModel noise{0.01, 5.0};
    for (int m = 0; m < 2; ++m) {
        const auto res = detect_mpa(superpose({m}, cb), cb, g, noise, 1);
        CHECK(res.decided[0] == m);
    }
}

TEST_CASE("detect_mpa: noiseless input decodes exactly") {
    const Codebook cb = generate_separable_codebook(4, 16, 1);
    const FactorGraph g = from_codebook(cb);
    const NoiseModel noise{1e-6, 5.0};
    auto rng = make_substream(17, 0);
    std::uniform_int_distribution<int> pick(0, 15);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<int> indices(cb.num_layers);
        for (auto& m : indices) m = pick(rng);
        const auto res = detect_mpa(superpose(indices, cb), cb, g, noise, 5);
        CHECK(res.decided == indices);
    }
}

TEST_CASE("detect_mpa is deterministic") {
    const Codebook cb = generate_separable_codebook(4, 16, 1);
    const FactorGraph g = from_codebook(cb);
    const NoiseModel noise{0.02, 5.0};
    auto rng = make_substream(23, 5);
    const auto y = transmit(encode(test::random_bits(rng, 24), cb), cb, noise, rng);
    const auto r1 = detect_mpa(y, cb, g, noise, 5);
    const auto r2 = detect_mpa(y, cb, g, noise, 5);
    CHECK(r1.decided == r2.decided);
    CHECK(r1.scores == r2.scores);
    CHECK_THROWS_AS(static_cast<void>(detect_mpa(y, cb, g, noise, 0)), std::invalid_argument);
}

TEST_CASE("detect_mpa tracks the joint MAP detector at high SNR") {
    const Codebook cb = generate_separable_codebook(3, 4, 1);
    const FactorGraph g = from_codebook(cb);
    const NoiseModel noise{0.01, 5.0};
    const int nbits = test::log2_int(4) * cb.num_layers;
    int agree = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        auto rng = make_substream(100, t);
        const auto y = transmit(encode(test::random_bits(rng, nbits), cb), cb, noise, rng);
        const auto bp = detect_mpa(y, cb, g, noise, 5);
        if (bp.decided == brute_force_map(y, cb, noise.n0)) ++agree;
    }
    CHECK(agree >= 990);
}

TEST_CASE("resource update is invariant under neighbor ordering") {
    // three layers on two resources, listed in two different orders
    Codebook cb;
    cb.num_resources = 2;
    cb.num_layers = 3;
    cb.num_codewords = 2;
    cb.num_nonzero = 2;
    cb.entries.resize(12);
    const cplx vals[3][2] = {{cplx{0.3, 0.1}, cplx{-0.3, -0.1}},
                             {cplx{0.5, -0.2}, cplx{-0.5, 0.2}},
                             {cplx{0.1, 0.4}, cplx{-0.1, -0.4}}};
    for (int j = 0; j < 3; ++j)
        for (int m = 0; m < 2; ++m)
            for (int k = 0; k < 2; ++k) cb.entry(j, m, k) = vals[j][m];

    Codebook cb_rot = cb;  // layers rotated: (0,1,2) -> (1,2,0)
    for (int m = 0; m < 2; ++m)
        for (int k = 0; k < 2; ++k) {
            cb_rot.entry(0, m, k) = vals[1][m];
            cb_rot.entry(1, m, k) = vals[2][m];
            cb_rot.entry(2, m, k) = vals[0][m];
        }

    const FactorGraph g = from_codebook(cb);
    const NoiseModel noise{0.05, 5.0};
    const ReceivedSignal y = {cplx{0.2, -0.1}, cplx{-0.3, 0.2}};
    MessageSet m1 = init_messages(g, 2);
    MessageSet m2 = init_messages(g, 2);
    update_resource_messages(m1, y, cb, noise, g);
    update_resource_messages(m2, y, cb_rot, noise, g);
    // layer 0 of cb is layer 2 of cb_rot
    for (int k = 0; k < 2; ++k)
        for (int m = 0; m < 2; ++m)
            CHECK(m1.u_at(g.edge(0, k))[m] ==
                  doctest::Approx(m2.u_at(g.edge(2, k))[m]).epsilon(1e-12));
}

TEST_CASE("scaling neighbor V vectors scales U by the product constant") {
    const Codebook cb = generate_separable_codebook(4, 16, 4);
    const FactorGraph g = from_codebook(cb);
    const NoiseModel noise{0.05, 5.0};
    auto rng = make_substream(31, 0);
    const auto y = transmit(encode(test::random_bits(rng, 24), cb), cb, noise, rng);

    MessageSet base = init_messages(g, 16);
    std::uniform_real_distribution<double> unit(0.1, 1.0);
    for (double& v : base.v) v = unit(rng);
    // a different positive constant per edge
    std::vector<double> edge_scale(g.num_edges);
    for (double& c : edge_scale) c = 0.5 + unit(rng);
    MessageSet scaled = base;
    for (int e = 0; e < g.num_edges; ++e)
        for (int m = 0; m < 16; ++m) scaled.v_at(e)[m] *= edge_scale[e];

    update_resource_messages(base, y, cb, noise, g);
    update_resource_messages(scaled, y, cb, noise, g);
    for (int k = 0; k < g.num_resources; ++k)
        for (int j : g.resource_adj[k]) {
            double factor = 1.0;
            for (int i : g.resource_adj[k])
                if (i != j) factor *= edge_scale[g.edge(i, k)];
            const int e = g.edge(j, k);
            int base_best = 0, scaled_best = 0;
            for (int m = 0; m < 16; ++m) {
                CHECK(scaled.u_at(e)[m] ==
                      doctest::Approx(base.u_at(e)[m] * factor).epsilon(1e-12));
                if (base.u_at(e)[m] > base.u_at(e)[base_best]) base_best = m;
                if (scaled.u_at(e)[m] > scaled.u_at(e)[scaled_best]) scaled_best = m;
            }
            CHECK(base_best == scaled_best);
        }
}

TEST_CASE("normalized V vectors are probability vectors") {
    const Codebook cb = generate_separable_codebook(4, 16, 6);
    const FactorGraph g = from_codebook(cb);
    const NoiseModel noise{0.02, 5.0};
    auto rng = make_substream(37, 0);
    const auto y = transmit(encode(test::random_bits(rng, 24), cb), cb, noise, rng);

    MessageSet msgs = init_messages(g, 16);
    for (int it = 0; it < 3; ++it) {
        update_resource_messages(msgs, y, cb, noise, g);
        update_layer_messages(msgs, g);
        for (int e = 0; e < g.num_edges; ++e) {
            double sum = 0.0;
            for (int m = 0; m < 16; ++m) {
                CHECK(msgs.v_at(e)[m] >= 0.0);
                sum += msgs.v_at(e)[m];
            }
            CHECK(std::abs(sum - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("detect_llr_mpa matches the linear detector") {
    const Codebook cb = generate_separable_codebook(3, 4, 1);
    const FactorGraph g = from_codebook(cb);
    const NoiseModel noise{0.05, 5.0};
    const int nbits = test::log2_int(4) * cb.num_layers;

    int checked = 0;
    for (int t = 0; t < 1000; ++t) {
        auto rng = make_substream(200, t);
        const auto y = transmit(encode(test::random_bits(rng, nbits), cb), cb, noise, rng);
        const auto lin = detect_mpa(y, cb, g, noise, 5);
        const auto log = detect_llr_mpa(y, cb, g, noise, 5);

        // skip near-ties in the linear scores
        bool near_tie = false;
        for (int j = 0; j < cb.num_layers; ++j) {
            const auto& s = lin.scores[j];
            double best = -1.0, second = -1.0;
            for (double v : s) {
                if (v > best) {
                    second = best;
                    best = v;
                } else if (v > second) {
                    second = v;
                }
            }
            if (best <= 0.0 || (best - second) <= 1e-9 * best) near_tie = true;
        }
        if (near_tie) continue;
        ++checked;
        CHECK(log.decided == lin.decided);

        // normalized beliefs agree
        for (int j = 0; j < cb.num_layers; ++j) {
            double sum = 0.0;
            for (double v : lin.scores[j]) sum += v;
            for (int m = 0; m < 4; ++m)
                CHECK(log.scores[j][m] ==
                      doctest::Approx(lin.scores[j][m] / sum).epsilon(1e-9));
        }
    }
    CHECK(checked > 900);
}

TEST_CASE("detect_llr_mpa survives N0 = 1e-4") {
    const Codebook cb = generate_separable_codebook(4, 16, 1);
    const FactorGraph g = from_codebook(cb);
    const NoiseModel noise{1e-4, 5.0};
    auto rng = make_substream(300, 0);
    std::uniform_int_distribution<int> pick(0, 15);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<int> indices(cb.num_layers);
        for (auto& m : indices) m = pick(rng);
        const auto y = transmit(indices, cb, noise, rng);
        const auto res = detect_llr_mpa(y, cb, g, noise, 5);
        CHECK(res.decided == indices);
        for (const auto& s : res.scores)
            for (double v : s) CHECK(std::isfinite(v));
    }
}

TEST_CASE("detect_split_mpa agrees with the full complex detector") {
    const Codebook cb = generate_separable_codebook(4, 16, 1);
    const FactorGraph g = from_codebook(cb);
    const NoiseModel noise{0.02, 5.0};
    int agree = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        auto rng = make_substream(400, t);
        const auto y = transmit(encode(test::random_bits(rng, 24), cb), cb, noise, rng);
        const auto full = detect_mpa(y, cb, g, noise, 5);
        const auto split = detect_split_mpa(y, cb, g, noise, 5);
        if (full.decided == split.decided) ++agree;
    }
    CHECK(agree >= 999);
}

TEST_CASE("detect_split_mpa rejects non-separable codebooks") {
    Codebook cb = generate_separable_codebook(4, 16, 1);
    cb.entry(0, 0, cb.support(0)[0]) += cplx{1e-3, 0.0};
    const FactorGraph g = from_codebook(cb);
    const NoiseModel noise{0.02, 5.0};
    const ReceivedSignal y(cb.num_resources, cplx{});
    CHECK_THROWS_AS(static_cast<void>(detect_split_mpa(y, cb, g, noise, 5)),
                    std::invalid_argument);
}

TEST_CASE("detect_split_mpa with a degenerate real dimension") {
    // real parts identical across codewords: the imaginary part decides
    const Codebook cb = test::make_single_layer_codebook(
        {cplx{0.5, -0.75}, cplx{0.5, -0.25}, cplx{0.5, 0.25}, cplx{0.5, 0.75}});
    const FactorGraph g = from_codebook(cb);
    const NoiseModel noise{0.02, 5.0};
    auto rng = make_substream(500, 0);
    std::uniform_int_distribution<int> pick(0, 3);
    for (int t = 0; t < 50; ++t) {
        const std::vector<int> indices = {pick(rng)};
        const auto y = transmit(indices, cb, noise, rng);
        const auto split = detect_split_mpa(y, cb, g, noise, 3);
        const auto full = detect_mpa(y, cb, g, noise, 3);
        CHECK(split.decided == full.decided);
        // the constant real factor cancels: normalized beliefs coincide
        double ssum = 0.0, fsum = 0.0;
        for (int m = 0; m < 4; ++m) {
            ssum += split.scores[0][m];
            fsum += full.scores[0][m];
        }
        for (int m = 0; m < 4; ++m)
            CHECK(split.scores[0][m] / ssum ==
                  doctest::Approx(full.scores[0][m] / fsum).epsilon(1e-9));
    }
}

TEST_SUITE_END();
