#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_support.hpp"

#include <cmath>

#include "gsit/graph_oracle.hpp"
#include "gsit/patterns.hpp"

using namespace gsit;
using namespace gsit::attn;
using gsit::num::kNegInf;
using gsit::num::Rng;
using gsit::num::Tensor2;
using gsit_test::check_close;
using gsit_test::random_encoder;

TEST_CASE("single query and key always attend fully") {
    const EncoderWeights w = random_encoder(1, 4);
    Rng rng(2);
    const auto maps = generate(w, rng.normal_tensor(1, 4), rng.normal_tensor(1, 4));
    REQUIRE(maps.size() == 1);
    CHECK(maps[0](0, 0) == 1.0);
}

TEST_CASE("masking to one block equals generating against the restricted keys") {
    const EncoderWeights w = random_encoder(3, 4, 2);
    Rng rng(4);
    const Tensor2 q = rng.normal_tensor(3, 4);
    const Tensor2 k = rng.normal_tensor(7, 4);

    // Allow only key rows [2, 5).
    Tensor2 mask(3, 7);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 7; ++c)
            if (c < 2 || c >= 5) mask(r, c) = kNegInf;

    const auto masked = generate(w, q, k, &mask);
    const auto restricted = generate(w, q, num::slice_rows(k, 2, 5));
    for (std::size_t l = 0; l < w.heads; ++l) {
        for (std::size_t r = 0; r < 3; ++r)
            for (std::size_t c = 0; c < 7; ++c) {
                const double expected = (c >= 2 && c < 5) ? restricted[l](r, c - 2) : 0.0;
                CHECK(std::abs(masked[l](r, c) - expected) <= 1e-12);
            }
    }
}

TEST_CASE("aggregate with one key row copies its value projection") {
    const EncoderWeights w = random_encoder(5, 4);
    Rng rng(6);
    const Tensor2 q = rng.normal_tensor(3, 4);
    const Tensor2 k = rng.normal_tensor(1, 4);
    const AttentionResult res = attend(w, q, k);
    const Tensor2 vproj = num::matmul(k, w.w_v);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 4; ++c) CHECK(std::abs(res.output(r, c) - vproj(0, c)) <= 1e-12);
}

TEST_CASE("identity maps return the value projection") {
    const EncoderWeights w = random_encoder(7, 4, 2);
    Rng rng(8);
    const Tensor2 x = rng.normal_tensor(5, 4);
    const std::vector<Tensor2> eye(2, Tensor2::identity(5));
    const Tensor2 out = aggregate(eye, x, w);
    check_close(out, num::matmul(x, w.w_v), 1e-12);
}

TEST_CASE("aggregate matches a per-vertex weighted-sum oracle") {
    const EncoderWeights w = random_encoder(9, 6, 2);
    Rng rng(10);
    const Tensor2 q = rng.normal_tensor(4, 6);
    const Tensor2 k = rng.normal_tensor(5, 6);
    const AttentionResult res = attend(w, q, k);

    const Tensor2 vproj = num::matmul(k, w.w_v);
    const std::size_t dh = w.head_dim();
    for (std::size_t l = 0; l < w.heads; ++l)
        for (std::size_t m = 0; m < 4; ++m)
            for (std::size_t c = 0; c < dh; ++c) {
                double acc = 0.0;
                for (std::size_t n = 0; n < 5; ++n) acc += res.maps[l](m, n) * vproj(n, l * dh + c);
                CHECK(std::abs(res.output(m, l * dh + c) - acc) <= 1e-12);
            }
}

TEST_CASE("generated maps match the edge-list softmax at 3x4 vs 5x4") {
    const EncoderWeights w = random_encoder(30, 4, 2);
    Rng rng(31);
    const graph::VertexSet dom{rng.normal_tensor(3, 4), "dominant"};
    const graph::VertexSet aux{rng.normal_tensor(5, 4), "auxiliary"};

    const auto maps = generate(w, dom.features, aux.features);
    const graph::ExplicitGraph g = graph::build_bipartite(dom, aux);
    const graph::GatResult oracle = graph::gat_aggregate(g, w);
    for (std::size_t l = 0; l < w.heads; ++l)
        for (std::size_t e = 0; e < g.edges.size(); ++e)
            CHECK(std::abs(maps[l](g.edges[e].target, g.edges[e].source) -
                           oracle.head_edge_weights[l][e]) <= 1e-12);
}

TEST_CASE("zero first-layer MLP weights give zero encodings") {
    EncoderWeights w = random_encoder(11, 4);
    w.w_1 = Tensor2(4, 8);
    Rng rng(12);
    const Tensor2 x = rng.normal_tensor(3, 4);
    const Tensor2 out = encode(w, x, x);
    CHECK(num::max_abs(out) == 0.0);
}

TEST_CASE("closed-form check at width 2, single head, single timestep") {
    EncoderWeights w;
    w.w_q = Tensor2::from_rows({{0.3, -0.1}, {0.2, 0.5}});
    w.w_k = Tensor2::from_rows({{-0.4, 0.6}, {0.1, 0.2}});
    w.w_v = Tensor2::from_rows({{0.7, 0.1}, {-0.3, 0.4}});
    w.w_1 = Tensor2::from_rows({{0.5, -0.2}, {0.1, 0.6}});
    w.w_2 = Tensor2::from_rows({{0.9, -0.5}, {0.2, 0.3}});
    w.heads = 1;

    const Tensor2 q = Tensor2::from_rows({{1.0, 2.0}});
    const Tensor2 k = Tensor2::from_rows({{-1.0, 0.5}});
    const Tensor2 out = encode(w, q, k);

    // Single key: the map is [[1]], so the output is mlp(k W_v).
    const double v0 = -1.0 * 0.7 + 0.5 * -0.3; // -0.85
    const double v1 = -1.0 * 0.1 + 0.5 * 0.4;  // 0.1
    const double h0 = std::max(0.0, v0 * 0.5 + v1 * 0.1);
    const double h1 = std::max(0.0, v0 * -0.2 + v1 * 0.6);
    const double y0 = h0 * 0.9 + h1 * 0.2;
    const double y1 = h0 * -0.5 + h1 * 0.3;
    CHECK(std::abs(out(0, 0) - y0) <= 1e-15);
    CHECK(std::abs(out(0, 1) - y1) <= 1e-15);
}

TEST_CASE("cross encoding equals the masked self-encoding restricted to its rows") {
    // The operational core of the block-adjacency view: encode(V_i, V_j)
    // equals the (i) rows of the full-sequence encoder masked to the (i,j)
    // block, with identical weights.
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Rng rng(Rng::mix(seed, 0xc0de));
        const std::size_t d = 4;
        const EncoderWeights w = random_encoder(seed, d, (seed % 2) + 1);
        const mask::SegmentLayout layout(1 + seed % 4, 2, 3);

        const Tensor2 v_t = rng.normal_tensor(layout.length(mask::Modality::text), d);
        const Tensor2 v_v = rng.normal_tensor(layout.length(mask::Modality::vision), d);
        const Tensor2 v_a = rng.normal_tensor(layout.length(mask::Modality::audio), d);
        const Tensor2 parts[] = {v_t, v_v, v_a};
        const Tensor2 v_m = num::concat_rows(std::span<const Tensor2>(parts, 3));

        const Tensor2 cross = encode(w, v_t, v_v);

        Tensor2 block_mask(layout.total(), layout.total(), kNegInf);
        const auto [t0, t1] = layout.range(mask::Modality::text);
        const auto [v0, v1] = layout.range(mask::Modality::vision);
        for (std::size_t r = t0; r < t1; ++r)
            for (std::size_t c = v0; c < v1; ++c) block_mask(r, c) = 0.0;
        // Other rows need at least one finite entry; let them see themselves.
        for (std::size_t r = t1; r < layout.total(); ++r) block_mask(r, r) = 0.0;

        const Tensor2 full = encode(w, v_m, v_m, &block_mask);
        check_close(cross, num::slice_rows(full, t0, t1), 1e-12);
    }
}

TEST_CASE("single-head path is bit-identical to a one-head multi-head run") {
    const EncoderWeights w = random_encoder(21, 6, 1);
    Rng rng(22);
    const Tensor2 q = rng.normal_tensor(4, 6);
    const Tensor2 k = rng.normal_tensor(3, 6);
    const Tensor2 a = encode(w, q, k);
    const Tensor2 b = encode(w, q, k);
    CHECK(gsit_test::bit_equal(a, b));
}

TEST_CASE("degenerate attention row reports its index") {
    const EncoderWeights w = random_encoder(23, 4);
    Rng rng(24);
    const Tensor2 q = rng.normal_tensor(2, 4);
    const Tensor2 k = rng.normal_tensor(3, 4);
    Tensor2 mask(2, 3);
    for (std::size_t c = 0; c < 3; ++c) mask(1, c) = kNegInf;
    try {
        generate(w, q, k, &mask);
        FAIL("expected DegenerateRowError");
    } catch (const DegenerateRowError& e) {
        CHECK(e.row_index == 1);
    }
}

TEST_CASE("encoder weight invariants") {
    Rng rng(25);
    CHECK_THROWS_AS(EncoderWeights::random(rng, 6, 12, 4, 0.1), ContractError); // 6 % 4 != 0
    CHECK_THROWS_AS(EncoderWeights::random(rng, 6, 4, 2, 0.1), ContractError);  // hidden < width
}
