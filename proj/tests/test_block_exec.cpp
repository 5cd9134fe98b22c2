#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_support.hpp"

#include "gsit/block_exec.hpp"
#include "gsit/models.hpp"

using namespace gsit;
using namespace gsit::exec;
using mask::Modality;
using mask::SegmentLayout;
using mask::StructureName;
using num::Rng;
using num::Tensor2;
using gsit_test::check_close;
using gsit_test::random_encoder;

namespace {
constexpr Modality T = Modality::text;
constexpr Modality V = Modality::vision;
constexpr Modality A = Modality::audio;
} // namespace

TEST_CASE("row groups follow the pattern, in t/v/a order") {
    const auto groups = row_groups(mask::fusion_patterns(StructureName::self_only).forward);
    REQUIRE(groups.size() == 3);
    CHECK(groups[0].row == T);
    CHECK(groups[0].cols == std::vector<Modality>({V, A}));
    CHECK(groups[1].cols == std::vector<Modality>({T, A}));
    CHECK(groups[2].cols == std::vector<Modality>({T, V}));

    const auto single = row_groups(mask::fusion_patterns(StructureName::original).forward);
    for (const RowGroup& g : single) CHECK(g.cols.size() == 1);

    CHECK_THROWS_AS(row_groups(mask::BlockPattern::from_pairs({{T, V}, {A, T}})), DegenerateRowError);
}

TEST_CASE("block-sparse execution equals the dense masked encoder") {
    for (StructureName s : {StructureName::original, StructureName::structure1, StructureName::structure2,
                            StructureName::structure3, StructureName::self_only, StructureName::iem}) {
        for (const auto& [label, pattern] : mask::patterns_of(s)) {
            for (std::uint64_t seed = 1; seed <= 5; ++seed) {
                Rng rng(Rng::mix(seed, 0xb10c));
                const SegmentLayout layout(1 + seed % 4, 2, 1 + seed % 3);
                const std::size_t d = 8;
                const attn::EncoderWeights w = random_encoder(seed * 7 + 1, d, (seed % 2) + 1);
                const Tensor2 v_m = rng.normal_tensor(layout.total(), d);

                const Tensor2 sparse = exec_stream(w, v_m, layout, pattern);
                const Tensor2 dense_mask = mask::materialize(pattern, layout);
                const Tensor2 dense = attn::encode(w, v_m, v_m, &dense_mask);
                CHECK(num::max_abs_diff(sparse, dense) <= 1e-12);
            }
        }
    }
}

TEST_CASE("self-only rows normalize across the union of their blocks") {
    Rng rng(11);
    const SegmentLayout layout(2, 3, 4);
    const attn::EncoderWeights w = random_encoder(12, 4);
    const Tensor2 v_m = rng.normal_tensor(layout.total(), 4);
    const mask::BlockPattern pattern = mask::fusion_patterns(StructureName::self_only).forward;

    const Tensor2 sparse = exec_stream(w, v_m, layout, pattern);
    const Tensor2 dense_mask = mask::materialize(pattern, layout);
    check_close(sparse, attn::encode(w, v_m, v_m, &dense_mask), 1e-12);
}

TEST_CASE("intra pattern equals independent per-segment self-attention") {
    Rng rng(13);
    const SegmentLayout layout(2, 3, 4);
    const attn::EncoderWeights w = random_encoder(14, 8, 2);
    const Tensor2 v_m = rng.normal_tensor(layout.total(), 8);

    const Tensor2 sparse = exec_stream(w, v_m, layout, mask::intra_pattern());
    for (Modality m : mask::kModalities) {
        const auto [r0, r1] = layout.range(m);
        const Tensor2 seg = num::slice_rows(v_m, r0, r1);
        const Tensor2 independent = attn::encode(w, seg, seg);
        CHECK(num::max_abs_diff(num::slice_rows(sparse, r0, r1), independent) <= 1e-12);
    }
}

TEST_CASE("memory report matches the worked example") {
    const SegmentLayout layout(2, 3, 4);
    const MemMeter m = memory_report(layout, mask::fusion_patterns(StructureName::original).forward, 1);
    CHECK(m.dense_total == 81);
    CHECK(m.block_sum == 26); // t*v=6, v*a=12, a*t=8
    CHECK(m.block_peak == 12);

    const MemMeter unit = memory_report(SegmentLayout(1, 1, 1), mask::intra_pattern(), 1);
    CHECK(unit.dense_total == 9);
    CHECK(unit.block_sum == 3);
    CHECK(unit.block_peak == 1);
}

TEST_CASE("stage-1 peak equals the largest forest pair map") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Rng rng(seed);
        const SegmentLayout layout(1 + rng.next_u64() % 9, 1 + rng.next_u64() % 9,
                                   1 + rng.next_u64() % 9);
        const std::uint64_t heads = 1 + rng.next_u64() % 2;
        const mask::PatternPair pp = mask::fusion_patterns(StructureName::original);
        const MemMeter fwd = memory_report(layout, pp.forward, heads);
        const MemMeter bwd = memory_report(layout, pp.backward, heads);

        std::uint64_t pair_peak = 0;
        for (Modality i : mask::kModalities)
            for (Modality j : mask::kModalities)
                if (i != j)
                    pair_peak = std::max(pair_peak, heads * layout.length(i) * layout.length(j));
        CHECK(std::max(fwd.block_peak, bwd.block_peak) == pair_peak);
    }
}

TEST_CASE("forest and decomposed shared-tree passes count identical flops") {
    Rng rng(15);
    model::ModelConfig cfg;
    cfg.layout = SegmentLayout(2, 3, 4);
    cfg.d = 8;
    cfg.p = 16;
    cfg.heads = 1;
    const model::GsitWeights g = model::GsitWeights::random(rng, cfg, 0.3);
    const model::MultWeights m = model::MultWeights::random(rng, cfg, 0.3);

    const Tensor2 v_t = rng.normal_tensor(2, 8), v_v = rng.normal_tensor(3, 8),
                  v_a = rng.normal_tensor(4, 8);
    const Tensor2 parts[] = {v_t, v_v, v_a};
    const Tensor2 v_m = num::concat_rows(std::span<const Tensor2>(parts, 3));

    FlopMeter mult_meter, gsit_meter, dense_meter;
    model::mult_forward(m, v_t, v_v, v_a, &mult_meter);
    model::gsit_forward(g, v_m, cfg.layout, StructureName::original, model::ExecPath::decomposed,
                        &gsit_meter);
    model::gsit_forward(g, v_m, cfg.layout, StructureName::original, model::ExecPath::dense,
                        &dense_meter);

    // 6 cross encoders project (T_i + 2 T_j) d^2 each: 6 * 9 * 64.
    CHECK(mult_meter.count(Counter::qkv1) == 3456);
    CHECK(mult_meter.counts() == gsit_meter.counts());
    CHECK(mult_meter.total() == gsit_meter.total());

    // The dense path generates full T_m^2 maps; decomposition touches only
    // the allowed blocks.
    CHECK(dense_meter.count(Counter::attn1_gen) > gsit_meter.count(Counter::attn1_gen));
    CHECK(dense_meter.count(Counter::attn1_softmax) == gsit_meter.count(Counter::attn1_softmax));
}

TEST_CASE("a meter covers exactly one pass") {
    Rng rng(16);
    model::ModelConfig cfg;
    cfg.layout = SegmentLayout(1, 1, 1);
    cfg.d = 4;
    cfg.p = 8;
    const model::GsitWeights g = model::GsitWeights::random(rng, cfg, 0.3);
    const Tensor2 v_m = rng.normal_tensor(3, 4);

    FlopMeter meter;
    model::gsit_forward(g, v_m, cfg.layout, StructureName::original, model::ExecPath::decomposed, &meter);
    CHECK(meter.pass_complete());
    CHECK_THROWS_AS(model::gsit_forward(g, v_m, cfg.layout, StructureName::original,
                                        model::ExecPath::decomposed, &meter),
                    AccountingError);
    meter.reset();
    model::gsit_forward(g, v_m, cfg.layout, StructureName::original, model::ExecPath::decomposed, &meter);
    CHECK(meter.pass_complete());
}

TEST_CASE("measured gather sizes match the closed-form memory report") {
    Rng rng(17);
    const SegmentLayout layout(3, 2, 5);
    const attn::EncoderWeights w = random_encoder(18, 4, 2);
    const Tensor2 v_m = rng.normal_tensor(layout.total(), 4);
    const mask::BlockPattern pattern = mask::fusion_patterns(StructureName::structure3).backward;

    MemMeter measured;
    exec_stream(w, v_m, layout, pattern, nullptr, Stage::one, &measured);
    const MemMeter predicted = memory_report(layout, pattern, 2);
    CHECK(measured.dense_total == predicted.dense_total);
    CHECK(measured.block_sum == predicted.block_sum);
    CHECK(measured.block_peak == predicted.block_peak);
}
