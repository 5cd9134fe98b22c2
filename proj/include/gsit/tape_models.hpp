#ifndef GSIT_TAPE_MODELS_HPP
#define GSIT_TAPE_MODELS_HPP

#include <array>
#include <map>

#include "gsit/models.hpp"
#include "gsit/tape.hpp"

namespace gsit::lab {

using num::NodeId;
using num::Tape;

// Tape-resident mirror of one encoder's parameters.
struct TapeEncoder {
    NodeId w_q, w_k, w_v, w_1, w_2;
    std::size_t heads = 1;
};

struct TapeGsit {
    TapeEncoder forward, backward, intra;
    NodeId f;
};

struct TapeMult {
    std::map<model::PairKey, TapeEncoder> cross;
    std::array<TapeEncoder, 3> self_enc;
    NodeId f;
};

struct TapeNaive {
    TapeEncoder enc;
    NodeId f;
};

TapeEncoder register_encoder(Tape& tape, const attn::EncoderWeights& w);
TapeGsit register_gsit(Tape& tape, const model::GsitWeights& w);
// Aliased encoders are registered once, so tied weights stay tied under
// gradient updates.
TapeMult register_mult(Tape& tape, const model::MultWeights& w);
TapeNaive register_naive(Tape& tape, const model::NaiveWeights& w);

// Differentiable encoder, numerically identical to attn::encode.
NodeId tape_encode(Tape& tape, const TapeEncoder& w, NodeId queries, NodeId keys,
                   const num::Tensor2* mask = nullptr);

NodeId tape_gsit_predict(Tape& tape, const TapeGsit& w, NodeId v_m, const mask::SegmentLayout& layout,
                         mask::StructureName structure);
NodeId tape_mult_predict(Tape& tape, const TapeMult& w, NodeId v_t, NodeId v_v, NodeId v_a);
NodeId tape_naive_predict(Tape& tape, const TapeNaive& w, NodeId v_m, const mask::SegmentLayout& layout);

// One SGD step: w -= lr * grad for every registered parameter. Call after
// Tape::backward.
void sgd_step(Tape& tape, const TapeEncoder& ids, attn::EncoderWeights& w, double lr);
void sgd_step(Tape& tape, const TapeGsit& ids, model::GsitWeights& w, double lr);
void sgd_step(Tape& tape, const TapeMult& ids, model::MultWeights& w, double lr);
void sgd_step(Tape& tape, const TapeNaive& ids, model::NaiveWeights& w, double lr);

} // namespace gsit::lab

#endif
