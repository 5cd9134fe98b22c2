#ifndef GSIT_MODELS_HPP
#define GSIT_MODELS_HPP

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gsit/attention.hpp"
#include "gsit/block_exec.hpp"
#include "gsit/patterns.hpp"

namespace gsit::model {

using attn::EncoderWeights;
using mask::Modality;
using mask::SegmentLayout;
using mask::StructureName;
using num::Tensor2;

struct ModelConfig {
    SegmentLayout layout{1, 1, 1};
    std::size_t d = 8;       // model width; stage-2 encoders run at 2d
    std::size_t p = 16;      // MLP hidden width; stage-2 MLPs run at 2p
    std::size_t heads = 1;
    std::size_t out_dim = 1;
    StructureName structure = StructureName::original;

    void check() const; // d % heads, 2d % heads, p >= d
};

// Three encoders total: the two fusion streams at width d and the intra
// encoder at width 2d, plus the final linear map f (6d x out_dim).
// Encoders are held by shared_ptr so tying can alias them.
struct GsitWeights {
    std::shared_ptr<EncoderWeights> forward;
    std::shared_ptr<EncoderWeights> backward;
    std::shared_ptr<EncoderWeights> intra;
    std::shared_ptr<Tensor2> f;

    static GsitWeights random(num::Rng& rng, const ModelConfig& cfg, double init_std);
};

using PairKey = std::pair<Modality, Modality>; // (dominant, auxiliary)

// Six cross encoders keyed by ordered modality pair, three width-2d self
// encoders, and f.
struct MultWeights {
    std::map<PairKey, std::shared_ptr<EncoderWeights>> cross;
    std::array<std::shared_ptr<EncoderWeights>, 3> self_enc;
    std::shared_ptr<Tensor2> f;

    static MultWeights random(num::Rng& rng, const ModelConfig& cfg, double init_std);
};

// One unmasked self-attention encoder over the concatenated sequence plus
// f (3d x out_dim).
struct NaiveWeights {
    std::shared_ptr<EncoderWeights> enc;
    std::shared_ptr<Tensor2> f;

    static NaiveWeights random(num::Rng& rng, const ModelConfig& cfg, double init_std);
};

// The dominant modality each cross stream fuses from: forward is the
// t->v->a->t cycle, backward its reverse.
Modality forward_partner(Modality m);
Modality backward_partner(Modality m);

struct ModelOutput {
    Tensor2 prediction;                  // 1 x out_dim
    std::array<Tensor2, 3> final_states; // H_t, H_v, H_a, one row each
    // Retained intermediates: stage-1 stream outputs and (dense path only)
    // per-head adjacency maps, keyed by stream label.
    std::vector<std::pair<std::string, Tensor2>> stage1_outputs;
    std::vector<std::pair<std::string, std::vector<Tensor2>>> stage1_maps;
};

enum class ExecPath { dense, decomposed };

ModelOutput naive_forward(const NaiveWeights& w, const Tensor2& v_m, const SegmentLayout& layout,
                          exec::FlopMeter* meter = nullptr);

ModelOutput mult_forward(const MultWeights& w, const Tensor2& v_t, const Tensor2& v_v,
                         const Tensor2& v_a, exec::FlopMeter* meter = nullptr);

// All-modal-in-one fusion: both interlaced-masked streams over the
// concatenated sequence, feature-concat, then the intra-masked stage and
// per-segment last-row readout. The decomposed path runs block-sparse
// with identical semantics.
ModelOutput gsit_forward(const GsitWeights& w, const Tensor2& v_m, const SegmentLayout& layout,
                         StructureName structure, ExecPath path = ExecPath::dense,
                         exec::FlopMeter* meter = nullptr);

// Shares one weight set across the six cross and three self encoders:
// the forward cycle pairs alias the forward encoder, the backward cycle
// pairs the backward encoder, all self encoders the intra encoder.
MultWeights tie_weights(const GsitWeights& g);

} // namespace gsit::model

#endif
