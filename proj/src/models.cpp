#include "gsit/models.hpp"

namespace gsit::model {

using exec::FlopMeter;
using exec::Phase;
using exec::Stage;

void ModelConfig::check() const {
    if (heads == 0 || d % heads != 0 || (2 * d) % heads != 0)
        throw ContractError("both d and 2d must be divisible by the head count");
    if (p < d) throw ContractError("MLP hidden width must be >= d");
    if (out_dim == 0) throw ContractError("out_dim must be >= 1");
}

GsitWeights GsitWeights::random(num::Rng& rng, const ModelConfig& cfg, double init_std) {
    cfg.check();
    GsitWeights w;
    w.forward = std::make_shared<EncoderWeights>(
        EncoderWeights::random(rng, cfg.d, cfg.p, cfg.heads, init_std));
    w.backward = std::make_shared<EncoderWeights>(
        EncoderWeights::random(rng, cfg.d, cfg.p, cfg.heads, init_std));
    w.intra = std::make_shared<EncoderWeights>(
        EncoderWeights::random(rng, 2 * cfg.d, 2 * cfg.p, cfg.heads, init_std));
    w.f = std::make_shared<Tensor2>(rng.normal_tensor(6 * cfg.d, cfg.out_dim, init_std));
    return w;
}

MultWeights MultWeights::random(num::Rng& rng, const ModelConfig& cfg, double init_std) {
    cfg.check();
    MultWeights w;
    for (Modality i : mask::kModalities)
        for (Modality j : mask::kModalities)
            if (i != j)
                w.cross[{i, j}] = std::make_shared<EncoderWeights>(
                    EncoderWeights::random(rng, cfg.d, cfg.p, cfg.heads, init_std));
    for (std::size_t i = 0; i < 3; ++i)
        w.self_enc[i] = std::make_shared<EncoderWeights>(
            EncoderWeights::random(rng, 2 * cfg.d, 2 * cfg.p, cfg.heads, init_std));
    w.f = std::make_shared<Tensor2>(rng.normal_tensor(6 * cfg.d, cfg.out_dim, init_std));
    return w;
}

NaiveWeights NaiveWeights::random(num::Rng& rng, const ModelConfig& cfg, double init_std) {
    cfg.check();
    NaiveWeights w;
    w.enc = std::make_shared<EncoderWeights>(
        EncoderWeights::random(rng, cfg.d, cfg.p, cfg.heads, init_std));
    w.f = std::make_shared<Tensor2>(rng.normal_tensor(3 * cfg.d, cfg.out_dim, init_std));
    return w;
}

Modality forward_partner(Modality m) {
    switch (m) {
    case Modality::text: return Modality::vision;
    case Modality::vision: return Modality::audio;
    case Modality::audio: return Modality::text;
    }
    throw ContractError("bad modality");
}

Modality backward_partner(Modality m) {
    switch (m) {
    case Modality::text: return Modality::audio;
    case Modality::vision: return Modality::text;
    case Modality::audio: return Modality::vision;
    }
    throw ContractError("bad modality");
}

namespace {

Tensor2 final_projection(const std::array<Tensor2, 3>& states, const Tensor2& f, FlopMeter* meter) {
    const Tensor2 parts[] = {states[0], states[1], states[2]};
    const Tensor2 h = num::concat_cols(std::span<const Tensor2>(parts, 3));
    if (h.cols() != f.rows()) throw ShapeError("final projection width mismatch");
    if (meter) meter->add(Stage::two, Phase::final_projection, h.cols() * f.cols());
    return num::matmul(h, f);
}

} // namespace

ModelOutput naive_forward(const NaiveWeights& w, const Tensor2& v_m, const SegmentLayout& layout,
                          FlopMeter* meter) {
    if (v_m.rows() != layout.total()) throw ShapeError("naive_forward: sequence/layout mismatch");
    if (meter) meter->begin_pass();

    ModelOutput out;
    const attn::AttentionResult att = attn::attend(*w.enc, v_m, v_m, nullptr, meter, Stage::one);
    const Tensor2 encoded = attn::mlp(*w.enc, att.output, meter, Stage::one);
    out.stage1_outputs.emplace_back("self", encoded);
    out.stage1_maps.emplace_back("self", att.maps);

    for (Modality m : mask::kModalities) {
        const auto [r0, r1] = layout.range(m);
        out.final_states[static_cast<std::size_t>(m)] = num::slice_rows(encoded, r1 - 1, r1);
    }
    out.prediction = final_projection(out.final_states, *w.f, meter);
    if (meter) meter->end_pass();
    return out;
}

ModelOutput mult_forward(const MultWeights& w, const Tensor2& v_t, const Tensor2& v_v,
                         const Tensor2& v_a, FlopMeter* meter) {
    const std::array<const Tensor2*, 3> inputs{&v_t, &v_v, &v_a};
    if (meter) meter->begin_pass();

    ModelOutput out;
    for (Modality i : mask::kModalities) {
        const std::size_t idx = static_cast<std::size_t>(i);
        const Modality jf = forward_partner(i);
        const Modality jb = backward_partner(i);
        const Tensor2& q = *inputs[idx];

        const Tensor2 from_fwd = attn::encode(*w.cross.at({i, jf}), q,
                                              *inputs[static_cast<std::size_t>(jf)], nullptr, meter,
                                              Stage::one);
        const Tensor2 from_bwd = attn::encode(*w.cross.at({i, jb}), q,
                                              *inputs[static_cast<std::size_t>(jb)], nullptr, meter,
                                              Stage::one);
        // Feature-concat order fixed as (forward partner, backward partner)
        // to line up with the stream concat of the shared-tree form.
        const Tensor2 vbar = num::concat_cols(from_fwd, from_bwd);
        out.stage1_outputs.emplace_back(std::string("vbar_") + mask::short_name(i), vbar);

        const Tensor2 enhanced = attn::encode(*w.self_enc[idx], vbar, vbar, nullptr, meter, Stage::two);
        out.final_states[idx] = num::slice_rows(enhanced, enhanced.rows() - 1, enhanced.rows());
    }
    out.prediction = final_projection(out.final_states, *w.f, meter);
    if (meter) meter->end_pass();
    return out;
}

ModelOutput gsit_forward(const GsitWeights& w, const Tensor2& v_m, const SegmentLayout& layout,
                         StructureName structure, ExecPath path, FlopMeter* meter) {
    if (v_m.rows() != layout.total()) throw ShapeError("gsit_forward: sequence/layout mismatch");
    const mask::PatternPair patterns = mask::fusion_patterns(structure);
    if (meter) meter->begin_pass();

    ModelOutput out;
    Tensor2 stream_fwd, stream_bwd;
    if (path == ExecPath::dense) {
        const Tensor2 m_fwd = mask::materialize(patterns.forward, layout);
        const Tensor2 m_bwd = mask::materialize(patterns.backward, layout);
        const attn::AttentionResult att_f = attn::attend(*w.forward, v_m, v_m, &m_fwd, meter, Stage::one);
        stream_fwd = attn::mlp(*w.forward, att_f.output, meter, Stage::one);
        const attn::AttentionResult att_b = attn::attend(*w.backward, v_m, v_m, &m_bwd, meter, Stage::one);
        stream_bwd = attn::mlp(*w.backward, att_b.output, meter, Stage::one);
        out.stage1_maps.emplace_back("forward", att_f.maps);
        out.stage1_maps.emplace_back("backward", att_b.maps);
    } else {
        stream_fwd = exec::exec_stream(*w.forward, v_m, layout, patterns.forward, meter, Stage::one);
        stream_bwd = exec::exec_stream(*w.backward, v_m, layout, patterns.backward, meter, Stage::one);
    }
    out.stage1_outputs.emplace_back("forward", stream_fwd);
    out.stage1_outputs.emplace_back("backward", stream_bwd);

    const Tensor2 vbar_m = num::concat_cols(stream_fwd, stream_bwd);
    Tensor2 enhanced;
    if (path == ExecPath::dense) {
        const Tensor2 m_intra = mask::materialize(mask::intra_pattern(), layout);
        const attn::AttentionResult att_i = attn::attend(*w.intra, vbar_m, vbar_m, &m_intra, meter, Stage::two);
        enhanced = attn::mlp(*w.intra, att_i.output, meter, Stage::two);
        out.stage1_maps.emplace_back("intra", att_i.maps);
    } else {
        enhanced = exec::exec_stream(*w.intra, vbar_m, layout, mask::intra_pattern(), meter, Stage::two);
    }

    for (Modality m : mask::kModalities) {
        const auto [r0, r1] = layout.range(m);
        out.final_states[static_cast<std::size_t>(m)] = num::slice_rows(enhanced, r1 - 1, r1);
    }
    out.prediction = final_projection(out.final_states, *w.f, meter);
    if (meter) meter->end_pass();
    return out;
}

MultWeights tie_weights(const GsitWeights& g) {
    MultWeights w;
    for (Modality i : mask::kModalities) {
        w.cross[{i, forward_partner(i)}] = g.forward;
        w.cross[{i, backward_partner(i)}] = g.backward;
        w.self_enc[static_cast<std::size_t>(i)] = g.intra;
    }
    w.f = g.f;
    return w;
}

} // namespace gsit::model
