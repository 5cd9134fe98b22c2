#ifndef GSIT_COMPLEXITY_HPP
#define GSIT_COMPLEXITY_HPP

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gsit/checkpoint.hpp"
#include "gsit/meters.hpp"
#include "gsit/models.hpp"

namespace gsit::cost {

using exec::Counter;
using exec::kCounterCount;
using model::ModelConfig;
using model::ModelKind;

// Exact per-phase multiplication/op counts for one forward pass of a model
// kind at a config, mirroring the FlopMeter counters one for one.
struct ComplexityBreakdown {
    std::array<std::uint64_t, kCounterCount> counts{};
    bool decomposed = false;

    std::uint64_t count(Counter c) const { return counts[static_cast<std::size_t>(c)]; }
    std::uint64_t& at(Counter c) { return counts[static_cast<std::size_t>(c)]; }
    std::uint64_t total() const;
};

// Closed-form evaluation of the per-phase cost of a forward pass; for the
// shared-tree model, `decomposed` selects block-sparse versus dense masked
// execution. Guaranteed breakdown(mult) == breakdown(gsit, decomposed)
// termwise for exact-coverage structures.
ComplexityBreakdown flops_closed_form(const ModelConfig& cfg, ModelKind kind, bool decomposed);

// Distinct-storage parameter counts; aliased (tied) encoders are counted
// once. The final linear map is reported separately so the fusion-encoder
// ratio can be taken with f excluded.
struct ParamCount {
    std::vector<std::pair<std::string, std::size_t>> per_encoder;
    std::uint64_t fusion_total = 0;   // all distinct encoders, f excluded
    std::uint64_t final_projection = 0;
    std::uint64_t total() const { return fusion_total + final_projection; }
};

ParamCount params(const model::GsitWeights& w);
ParamCount params(const model::MultWeights& w);
ParamCount params(const model::NaiveWeights& w);

// Closed-form fusion parameter counts straight from (d, p).
std::uint64_t gsit_fusion_params(std::size_t d, std::size_t p);
std::uint64_t mult_fusion_params(std::size_t d, std::size_t p);

struct ReconcileDiff {
    std::string phase;
    std::uint64_t measured = 0;
    std::uint64_t predicted = 0;
};

struct ReconcileReport {
    bool ok = false;
    std::vector<ReconcileDiff> diffs;
};

// Exact integer equality per phase between an instrumented pass and the
// closed form; mismatches list the offending phases.
ReconcileReport reconcile(const exec::FlopMeter& measured, const ComplexityBreakdown& predicted);

// Coarse pairwise-fusion attention term: combined generate+aggregate cost
// over the three bi-modality combinations, counting two elementwise ops
// per map entry: (T_t*T_v + T_t*T_a + T_v*T_a) * (4d + 4).
std::uint64_t pair_attention_term(const mask::SegmentLayout& layout, std::size_t d);

// Stage-1 projection term shared by both model families: 6 * (sum T) * d^2.
std::uint64_t qkv1_term(const mask::SegmentLayout& layout, std::size_t d);

// Space closed forms for one stream, identical to exec::memory_report.
exec::MemMeter space_closed_form(const mask::SegmentLayout& layout, const mask::BlockPattern& pattern,
                                 std::size_t heads);

} // namespace gsit::cost

#endif
