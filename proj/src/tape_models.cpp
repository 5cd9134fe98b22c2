#include "gsit/tape_models.hpp"

#include <cmath>
#include <vector>

namespace gsit::lab {

using mask::Modality;

TapeEncoder register_encoder(Tape& tape, const attn::EncoderWeights& w) {
    TapeEncoder e;
    e.w_q = tape.param(w.w_q);
    e.w_k = tape.param(w.w_k);
    e.w_v = tape.param(w.w_v);
    e.w_1 = tape.param(w.w_1);
    e.w_2 = tape.param(w.w_2);
    e.heads = w.heads;
    return e;
}

TapeGsit register_gsit(Tape& tape, const model::GsitWeights& w) {
    TapeGsit g;
    g.forward = register_encoder(tape, *w.forward);
    g.backward = register_encoder(tape, *w.backward);
    g.intra = register_encoder(tape, *w.intra);
    g.f = tape.param(*w.f);
    return g;
}

TapeMult register_mult(Tape& tape, const model::MultWeights& w) {
    TapeMult m;
    std::map<const attn::EncoderWeights*, TapeEncoder> seen;
    auto intern = [&](const std::shared_ptr<attn::EncoderWeights>& enc) {
        auto it = seen.find(enc.get());
        if (it == seen.end()) it = seen.emplace(enc.get(), register_encoder(tape, *enc)).first;
        return it->second;
    };
    for (const auto& [key, enc] : w.cross) m.cross[key] = intern(enc);
    for (std::size_t i = 0; i < 3; ++i) m.self_enc[i] = intern(w.self_enc[i]);
    m.f = tape.param(*w.f);
    return m;
}

TapeNaive register_naive(Tape& tape, const model::NaiveWeights& w) {
    return {register_encoder(tape, *w.enc), tape.param(*w.f)};
}

NodeId tape_encode(Tape& tape, const TapeEncoder& w, NodeId queries, NodeId keys,
                   const num::Tensor2* mask) {
    const std::size_t d = tape.value(w.w_q).rows();
    const std::size_t dh = d / w.heads;
    const double inv_scale = 1.0 / std::sqrt(static_cast<double>(dh));

    const NodeId q = tape.matmul(queries, w.w_q);
    const NodeId k = tape.matmul(keys, w.w_k);
    const NodeId v = tape.matmul(keys, w.w_v);

    std::vector<NodeId> head_outputs;
    head_outputs.reserve(w.heads);
    for (std::size_t l = 0; l < w.heads; ++l) {
        const NodeId ql = tape.slice_cols(q, l * dh, (l + 1) * dh);
        const NodeId kl = tape.slice_cols(k, l * dh, (l + 1) * dh);
        const NodeId scores = tape.scale(tape.matmul_nt(ql, kl), inv_scale);
        const NodeId g = mask ? tape.softmax_rows(scores, *mask) : tape.softmax_rows(scores);
        const NodeId vl = tape.slice_cols(v, l * dh, (l + 1) * dh);
        head_outputs.push_back(tape.matmul(g, vl));
    }
    const NodeId attended = tape.concat_cols(head_outputs);
    return tape.matmul(tape.relu(tape.matmul(attended, w.w_1)), w.w_2);
}

namespace {

NodeId readout(Tape& tape, NodeId encoded, const mask::SegmentLayout& layout, NodeId f) {
    std::vector<NodeId> states;
    for (Modality m : mask::kModalities) {
        const auto [r0, r1] = layout.range(m);
        states.push_back(tape.slice_rows(encoded, r1 - 1, r1));
    }
    return tape.matmul(tape.concat_cols(states), f);
}

} // namespace

NodeId tape_gsit_predict(Tape& tape, const TapeGsit& w, NodeId v_m, const mask::SegmentLayout& layout,
                         mask::StructureName structure) {
    const mask::PatternPair patterns = mask::fusion_patterns(structure);
    const num::Tensor2 m_fwd = mask::materialize(patterns.forward, layout);
    const num::Tensor2 m_bwd = mask::materialize(patterns.backward, layout);
    const num::Tensor2 m_intra = mask::materialize(mask::intra_pattern(), layout);

    const NodeId stream_f = tape_encode(tape, w.forward, v_m, v_m, &m_fwd);
    const NodeId stream_b = tape_encode(tape, w.backward, v_m, v_m, &m_bwd);
    const std::vector<NodeId> streams{stream_f, stream_b};
    const NodeId vbar = tape.concat_cols(streams);
    const NodeId enhanced = tape_encode(tape, w.intra, vbar, vbar, &m_intra);
    return readout(tape, enhanced, layout, w.f);
}

NodeId tape_mult_predict(Tape& tape, const TapeMult& w, NodeId v_t, NodeId v_v, NodeId v_a) {
    const std::array<NodeId, 3> inputs{v_t, v_v, v_a};
    std::vector<NodeId> states;
    for (Modality i : mask::kModalities) {
        const std::size_t idx = static_cast<std::size_t>(i);
        const Modality jf = model::forward_partner(i);
        const Modality jb = model::backward_partner(i);
        const NodeId from_fwd =
            tape_encode(tape, w.cross.at({i, jf}), inputs[idx], inputs[static_cast<std::size_t>(jf)]);
        const NodeId from_bwd =
            tape_encode(tape, w.cross.at({i, jb}), inputs[idx], inputs[static_cast<std::size_t>(jb)]);
        const std::vector<NodeId> parts{from_fwd, from_bwd};
        const NodeId vbar = tape.concat_cols(parts);
        const NodeId enhanced = tape_encode(tape, w.self_enc[idx], vbar, vbar);
        states.push_back(tape.last_row(enhanced));
    }
    return tape.matmul(tape.concat_cols(states), w.f);
}

NodeId tape_naive_predict(Tape& tape, const TapeNaive& w, NodeId v_m, const mask::SegmentLayout& layout) {
    const NodeId encoded = tape_encode(tape, w.enc, v_m, v_m);
    return readout(tape, encoded, layout, w.f);
}

namespace {

void apply_sgd(Tape& tape, NodeId id, num::Tensor2& w, double lr) {
    const num::Tensor2& g = tape.grad(id);
    for (std::size_t i = 0; i < w.size(); ++i) w.flat()[i] -= lr * g.flat()[i];
}

} // namespace

void sgd_step(Tape& tape, const TapeEncoder& ids, attn::EncoderWeights& w, double lr) {
    apply_sgd(tape, ids.w_q, w.w_q, lr);
    apply_sgd(tape, ids.w_k, w.w_k, lr);
    apply_sgd(tape, ids.w_v, w.w_v, lr);
    apply_sgd(tape, ids.w_1, w.w_1, lr);
    apply_sgd(tape, ids.w_2, w.w_2, lr);
}

void sgd_step(Tape& tape, const TapeGsit& ids, model::GsitWeights& w, double lr) {
    sgd_step(tape, ids.forward, *w.forward, lr);
    sgd_step(tape, ids.backward, *w.backward, lr);
    sgd_step(tape, ids.intra, *w.intra, lr);
    apply_sgd(tape, ids.f, *w.f, lr);
}

void sgd_step(Tape& tape, const TapeMult& ids, model::MultWeights& w, double lr) {
    // Visit each distinct encoder once; aliased entries share storage.
    std::map<const attn::EncoderWeights*, bool> done;
    for (auto& [key, enc] : w.cross) {
        if (done.emplace(enc.get(), true).second) sgd_step(tape, ids.cross.at(key), *enc, lr);
    }
    for (std::size_t i = 0; i < 3; ++i) {
        if (done.emplace(w.self_enc[i].get(), true).second)
            sgd_step(tape, ids.self_enc[i], *w.self_enc[i], lr);
    }
    apply_sgd(tape, ids.f, *w.f, lr);
}

void sgd_step(Tape& tape, const TapeNaive& ids, model::NaiveWeights& w, double lr) {
    sgd_step(tape, ids.enc, *w.enc, lr);
    apply_sgd(tape, ids.f, *w.f, lr);
}

} // namespace gsit::lab
