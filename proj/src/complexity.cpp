#include "gsit/complexity.hpp"

#include <set>

namespace gsit::cost {

using exec::Stage;
using mask::Modality;

std::uint64_t ComplexityBreakdown::total() const {
    std::uint64_t t = 0;
    for (std::uint64_t c : counts) t += c;
    return t;
}

namespace {

struct LayoutSums {
    std::uint64_t t_sum;   // T_t + T_v + T_a
    std::uint64_t sq_sum;  // sum of T_i^2
    std::array<std::uint64_t, 3> len;
};

LayoutSums sums_of(const mask::SegmentLayout& layout) {
    LayoutSums s{0, 0, {}};
    for (std::size_t i = 0; i < 3; ++i) {
        s.len[i] = layout.lengths()[i];
        s.t_sum += s.len[i];
        s.sq_sum += s.len[i] * s.len[i];
    }
    return s;
}

// Sum of T_i * T_j over the pattern's allowed blocks.
std::uint64_t allowed_block_elems(const mask::BlockPattern& p, const LayoutSums& s) {
    std::uint64_t total = 0;
    for (const auto& [i, j] : p.allowed_pairs())
        total += s.len[static_cast<std::size_t>(i)] * s.len[static_cast<std::size_t>(j)];
    return total;
}

void add_stream(ComplexityBreakdown& b, Stage stage, const mask::BlockPattern& pattern,
                const LayoutSums& s, std::size_t width, std::size_t hidden, std::size_t heads,
                bool decomposed) {
    const std::uint64_t tm = s.t_sum;
    const std::uint64_t blocks = allowed_block_elems(pattern, s);
    const std::uint64_t map_elems = decomposed ? blocks : tm * tm;

    b.at(exec::counter_for(stage, exec::Phase::qkv_projection)) += 3 * tm * width * width;
    b.at(exec::counter_for(stage, exec::Phase::map_generation)) += map_elems * width;
    b.at(exec::counter_for(stage, exec::Phase::scale)) += heads * map_elems;
    // Softmax touches finite entries only, so the dense masked path and the
    // decomposed path register the same count.
    b.at(exec::counter_for(stage, exec::Phase::softmax)) += 2 * heads * blocks;
    b.at(exec::counter_for(stage, exec::Phase::aggregation)) += map_elems * width;
    b.at(exec::counter_for(stage, exec::Phase::mlp)) += 2 * tm * width * hidden;
}

} // namespace

ComplexityBreakdown flops_closed_form(const ModelConfig& cfg, ModelKind kind, bool decomposed) {
    cfg.check();
    const LayoutSums s = sums_of(cfg.layout);
    const std::uint64_t d = cfg.d, p = cfg.p, L = cfg.heads, out = cfg.out_dim;

    ComplexityBreakdown b;
    b.decomposed = decomposed;

    switch (kind) {
    case ModelKind::naive: {
        const std::uint64_t tm = s.t_sum;
        b.at(Counter::qkv1) = 3 * tm * d * d;
        b.at(Counter::attn1_gen) = tm * tm * d;
        b.at(Counter::attn1_scale) = L * tm * tm;
        b.at(Counter::attn1_softmax) = 2 * L * tm * tm;
        b.at(Counter::attn1_agg) = tm * tm * d;
        b.at(Counter::mlp1) = 2 * tm * d * p;
        b.at(Counter::final_proj) = 3 * d * out;
        return b;
    }
    case ModelKind::mult: {
        // Six cross encoders: per ordered pair (i, j) the query projection
        // runs on T_i rows and the key/value projections on T_j rows.
        for (Modality i : mask::kModalities) {
            const std::uint64_t ti = s.len[static_cast<std::size_t>(i)];
            for (Modality j : mask::kModalities) {
                if (i == j) continue;
                const std::uint64_t tj = s.len[static_cast<std::size_t>(j)];
                b.at(Counter::qkv1) += (ti + 2 * tj) * d * d;
                b.at(Counter::attn1_gen) += ti * tj * d;
                b.at(Counter::attn1_scale) += L * ti * tj;
                b.at(Counter::attn1_softmax) += 2 * L * ti * tj;
                b.at(Counter::attn1_agg) += ti * tj * d;
                b.at(Counter::mlp1) += 2 * ti * d * p;
            }
            // Width-2d self encoder over the fused T_i sequence.
            b.at(Counter::qkv2) += 3 * ti * (2 * d) * (2 * d);
            b.at(Counter::attn2_gen) += ti * ti * 2 * d;
            b.at(Counter::attn2_scale) += L * ti * ti;
            b.at(Counter::attn2_softmax) += 2 * L * ti * ti;
            b.at(Counter::attn2_agg) += ti * ti * 2 * d;
            b.at(Counter::mlp2) += 2 * ti * (2 * d) * (2 * p);
        }
        b.at(Counter::final_proj) = 6 * d * out;
        return b;
    }
    case ModelKind::gsit: {
        const mask::PatternPair patterns = mask::fusion_patterns(cfg.structure);
        add_stream(b, Stage::one, patterns.forward, s, d, p, L, decomposed);
        add_stream(b, Stage::one, patterns.backward, s, d, p, L, decomposed);
        add_stream(b, Stage::two, mask::intra_pattern(), s, 2 * d, 2 * p, L, decomposed);
        b.at(Counter::final_proj) = 6 * d * out;
        return b;
    }
    }
    throw ContractError("unknown model kind");
}

namespace {

void count_encoder(ParamCount& pc, std::set<const attn::EncoderWeights*>& seen,
                   const std::string& name, const attn::EncoderWeights& enc) {
    if (!seen.insert(&enc).second) return; // aliased storage already counted
    pc.per_encoder.emplace_back(name, enc.param_count());
    pc.fusion_total += enc.param_count();
}

} // namespace

ParamCount params(const model::GsitWeights& w) {
    ParamCount pc;
    std::set<const attn::EncoderWeights*> seen;
    count_encoder(pc, seen, "forward", *w.forward);
    count_encoder(pc, seen, "backward", *w.backward);
    count_encoder(pc, seen, "intra", *w.intra);
    pc.final_projection = w.f->size();
    return pc;
}

ParamCount params(const model::MultWeights& w) {
    ParamCount pc;
    std::set<const attn::EncoderWeights*> seen;
    for (const auto& [key, enc] : w.cross)
        count_encoder(pc, seen,
                      std::string("cross_") + mask::short_name(key.first) + mask::short_name(key.second),
                      *enc);
    for (std::size_t i = 0; i < 3; ++i)
        count_encoder(pc, seen, std::string("self_") + mask::short_name(mask::modality_from_index(i)),
                      *w.self_enc[i]);
    pc.final_projection = w.f->size();
    return pc;
}

ParamCount params(const model::NaiveWeights& w) {
    ParamCount pc;
    std::set<const attn::EncoderWeights*> seen;
    count_encoder(pc, seen, "enc", *w.enc);
    pc.final_projection = w.f->size();
    return pc;
}

std::uint64_t gsit_fusion_params(std::size_t d, std::size_t p) {
    // Two width-d streams plus one width-2d intra encoder.
    return 2 * (3 * d * d + 2 * d * p) + (3 * (2 * d) * (2 * d) + 2 * (2 * d) * (2 * p));
}

std::uint64_t mult_fusion_params(std::size_t d, std::size_t p) {
    return 6 * (3 * d * d + 2 * d * p) + 3 * (3 * (2 * d) * (2 * d) + 2 * (2 * d) * (2 * p));
}

ReconcileReport reconcile(const exec::FlopMeter& measured, const ComplexityBreakdown& predicted) {
    ReconcileReport report;
    for (std::size_t c = 0; c < kCounterCount; ++c) {
        const std::uint64_t m = measured.counts()[c];
        const std::uint64_t p = predicted.counts[c];
        if (m != p) report.diffs.push_back({exec::counter_name(static_cast<Counter>(c)), m, p});
    }
    report.ok = report.diffs.empty();
    return report;
}

std::uint64_t pair_attention_term(const mask::SegmentLayout& layout, std::size_t d) {
    const auto& len = layout.lengths();
    const std::uint64_t s2 = len[0] * len[1] + len[0] * len[2] + len[1] * len[2];
    return s2 * (4 * d + 4);
}

std::uint64_t qkv1_term(const mask::SegmentLayout& layout, std::size_t d) {
    return 6 * static_cast<std::uint64_t>(layout.total()) * d * d;
}

exec::MemMeter space_closed_form(const mask::SegmentLayout& layout, const mask::BlockPattern& pattern,
                                 std::size_t heads) {
    return exec::memory_report(layout, pattern, heads);
}

} // namespace gsit::cost
