#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_support.hpp"

#include <cmath>

#include "gsit/graph_oracle.hpp"

using namespace gsit;
using namespace gsit::graph;
using gsit::num::Rng;
using gsit::num::Tensor2;
using gsit_test::check_close;
using gsit_test::random_encoder;

TEST_CASE("bipartite edge counts") {
    Rng rng(1);
    const VertexSet one{rng.normal_tensor(1, 4), "dom"};
    const VertexSet three{rng.normal_tensor(3, 4), "aux"};
    const ExplicitGraph g = build_bipartite(one, three);
    CHECK(g.edges.size() == 3);
    for (const Edge& e : g.edges) CHECK(e.target == 0);

    const VertexSet two_a{rng.normal_tensor(2, 4), "dom"};
    const VertexSet two_b{rng.normal_tensor(2, 4), "aux"};
    const ExplicitGraph g2 = build_bipartite(two_a, two_b);
    CHECK(g2.edges.size() == 4);

    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Rng r2(seed);
        const std::size_t nd = 1 + r2.next_u64() % 8;
        const std::size_t na = 1 + r2.next_u64() % 8;
        const ExplicitGraph g3 = build_bipartite({r2.normal_tensor(nd, 4), "d"},
                                                 {r2.normal_tensor(na, 4), "a"});
        CHECK(g3.edges.size() == nd * na);
    }
}

TEST_CASE("complete graph includes self-loops") {
    Rng rng(2);
    const ExplicitGraph g1 = build_complete({rng.normal_tensor(1, 4), "m"});
    REQUIRE(g1.edges.size() == 1);
    CHECK(g1.edges[0].target == 0);
    CHECK(g1.edges[0].source == 0);

    const ExplicitGraph g3 = build_complete({rng.normal_tensor(3, 4), "m"});
    CHECK(g3.edges.size() == 9);
}

TEST_CASE("single-source aggregation returns the source's value projection") {
    const attn::EncoderWeights w = random_encoder(3, 4);
    Rng rng(4);
    const VertexSet dom{rng.normal_tensor(1, 4), "d"};
    const VertexSet aux{rng.normal_tensor(1, 4), "a"};
    const GatResult res = gat_aggregate(build_bipartite(dom, aux), w);
    const Tensor2 vproj = num::matmul(aux.features, w.w_v);
    check_close(res.output, vproj, 1e-12);
}

TEST_CASE("two-source bipartite at width 1 matches the scalar convex combination") {
    attn::EncoderWeights w;
    w.w_q = Tensor2::from_rows({{0.8}});
    w.w_k = Tensor2::from_rows({{1.1}});
    w.w_v = Tensor2::from_rows({{-0.6}});
    w.w_1 = Tensor2::from_rows({{1.0}});
    w.w_2 = Tensor2::from_rows({{1.0}});
    w.heads = 1;

    const VertexSet dom{Tensor2::from_rows({{0.5}}), "d"};
    const VertexSet aux{Tensor2::from_rows({{1.5}, {-2.0}}), "a"};
    const GatResult res = gat_aggregate(build_bipartite(dom, aux), w);

    // Hand-derived: e_n = (q*0.8)*(k_n*1.1), alpha = softmax, out = sum alpha * (k_n*-0.6).
    const double q = 0.5 * 0.8;
    const double e1 = q * (1.5 * 1.1);
    const double e2 = q * (-2.0 * 1.1);
    const double m = std::max(e1, e2);
    const double a1 = std::exp(e1 - m), a2 = std::exp(e2 - m);
    const double z = a1 + a2;
    const double expected = (a1 / z) * (1.5 * -0.6) + (a2 / z) * (-2.0 * -0.6);
    CHECK(std::abs(res.output(0, 0) - expected) <= 1e-12);

    CHECK(std::abs(res.head_edge_weights[0][0] + res.head_edge_weights[0][1] - 1.0) <= 1e-12);
}

TEST_CASE("random bipartite and complete graphs match the attention path") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        Rng rng(Rng::mix(seed, 0x97a9));
        const std::size_t d = (seed % 2) ? 4 : 8;
        const std::size_t heads = (seed % 3 == 0) ? 2 : 1;
        const attn::EncoderWeights w = random_encoder(seed + 100, d, heads);

        const VertexSet dom{rng.normal_tensor(1 + rng.next_u64() % 8, d), "d"};
        const VertexSet aux{rng.normal_tensor(1 + rng.next_u64() % 8, d), "a"};
        const GatResult oracle = gat_aggregate(build_bipartite(dom, aux), w);
        const attn::AttentionResult att = attn::attend(w, dom.features, aux.features);
        CHECK(num::max_abs_diff(oracle.output, att.output) <= 1e-12);

        const VertexSet merged{rng.normal_tensor(1 + rng.next_u64() % 8, d), "m"};
        const GatResult oracle_self = gat_aggregate(build_complete(merged), w);
        const attn::AttentionResult att_self = attn::attend(w, merged.features, merged.features);
        CHECK(num::max_abs_diff(oracle_self.output, att_self.output) <= 1e-12);
    }
}

TEST_CASE("per-target coefficients sum to one") {
    const attn::EncoderWeights w = random_encoder(5, 4, 2);
    Rng rng(6);
    const VertexSet dom{rng.normal_tensor(4, 4), "d"};
    const VertexSet aux{rng.normal_tensor(5, 4), "a"};
    const ExplicitGraph g = build_bipartite(dom, aux);
    const GatResult res = gat_aggregate(g, w);
    for (std::size_t l = 0; l < w.heads; ++l)
        for (std::size_t m = 0; m < dom.count(); ++m) {
            double s = 0.0;
            for (std::size_t e = 0; e < g.edges.size(); ++e)
                if (g.edges[e].target == m) s += res.head_edge_weights[l][e];
            CHECK(std::abs(s - 1.0) <= 1e-12);
        }
}

TEST_CASE("removing an edge equals masking the matching attention entry") {
    const attn::EncoderWeights w = random_encoder(7, 4);
    Rng rng(8);
    const VertexSet dom{rng.normal_tensor(3, 4), "d"};
    const VertexSet aux{rng.normal_tensor(4, 4), "a"};

    ExplicitGraph g = build_bipartite(dom, aux);
    // Drop the edge (target 1, source 2).
    std::erase_if(g.edges, [](const Edge& e) { return e.target == 1 && e.source == 2; });
    const GatResult oracle = gat_aggregate(g, w);

    Tensor2 mask(3, 4);
    mask(1, 2) = num::kNegInf;
    const attn::AttentionResult att = attn::attend(w, dom.features, aux.features, &mask);
    CHECK(num::max_abs_diff(oracle.output, att.output) <= 1e-12);
}

TEST_CASE("isolated target is rejected") {
    const attn::EncoderWeights w = random_encoder(9, 4);
    Rng rng(10);
    ExplicitGraph g = build_bipartite({rng.normal_tensor(2, 4), "d"}, {rng.normal_tensor(2, 4), "a"});
    std::erase_if(g.edges, [](const Edge& e) { return e.target == 1; });
    CHECK_THROWS_AS(gat_aggregate(g, w), DegenerateRowError);
}
