#include "gsit/meters.hpp"

namespace gsit::exec {

const char* counter_name(Counter c) {
    switch (c) {
    case Counter::qkv1: return "qkv1";
    case Counter::attn1_gen: return "attn1_gen";
    case Counter::attn1_scale: return "attn1_scale";
    case Counter::attn1_softmax: return "attn1_softmax";
    case Counter::attn1_agg: return "attn1_agg";
    case Counter::mlp1: return "mlp1";
    case Counter::qkv2: return "qkv2";
    case Counter::attn2_gen: return "attn2_gen";
    case Counter::attn2_scale: return "attn2_scale";
    case Counter::attn2_softmax: return "attn2_softmax";
    case Counter::attn2_agg: return "attn2_agg";
    case Counter::mlp2: return "mlp2";
    case Counter::final_proj: return "final_proj";
    case Counter::count_: break;
    }
    return "?";
}

Counter counter_for(Stage stage, Phase phase) {
    if (phase == Phase::final_projection) return Counter::final_proj;
    const int base = stage == Stage::one ? static_cast<int>(Counter::qkv1) : static_cast<int>(Counter::qkv2);
    return static_cast<Counter>(base + static_cast<int>(phase));
}

std::uint64_t FlopMeter::total() const {
    std::uint64_t t = 0;
    for (std::uint64_t c : counts_) t += c;
    return t;
}

void FlopMeter::begin_pass() {
    if (in_pass_ || completed_)
        throw AccountingError("FlopMeter covers one forward pass; reset() before reuse");
    in_pass_ = true;
}

void FlopMeter::end_pass() {
    if (!in_pass_) throw AccountingError("FlopMeter::end_pass without begin_pass");
    in_pass_ = false;
    completed_ = true;
}

void FlopMeter::reset() {
    counts_.fill(0);
    in_pass_ = false;
    completed_ = false;
}

} // namespace gsit::exec
