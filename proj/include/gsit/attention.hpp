#ifndef GSIT_ATTENTION_HPP
#define GSIT_ATTENTION_HPP

#include <span>
#include <vector>

#include "gsit/meters.hpp"
#include "gsit/rng.hpp"
#include "gsit/tensor.hpp"

namespace gsit::attn {

using num::Tensor2;

// One attention encoder's parameters: q/k/v projections, the two-layer
// MLP, and the head count. width must be divisible by heads; the MLP
// hidden width must be at least the feature width.
struct EncoderWeights {
    Tensor2 w_q, w_k, w_v; // width x width
    Tensor2 w_1;           // width x hidden
    Tensor2 w_2;           // hidden x width
    std::size_t heads = 1;

    std::size_t width() const { return w_q.rows(); }
    std::size_t hidden() const { return w_1.cols(); }
    std::size_t head_dim() const { return width() / heads; }
    std::size_t param_count() const;

    void check() const; // throws ShapeError / ContractError on bad shapes

    static EncoderWeights random(num::Rng& rng, std::size_t width, std::size_t hidden,
                                 std::size_t heads, double init_std);
};

// Per-head attention maps plus the aggregated output.
struct AttentionResult {
    std::vector<Tensor2> maps; // per head, T_q x T_k; rows sum to 1
    Tensor2 output;            // T_q x width
};

// Adjacency generation: per head l, scores = (Q_l K_l^T) / sqrt(width/heads)
// plus the optional additive mask, row-softmaxed. Q_l, K_l are the l-th
// head_dim-wide column slices of queries*w_q and keys*w_k.
std::vector<Tensor2> generate(const EncoderWeights& w, const Tensor2& queries, const Tensor2& keys,
                              const Tensor2* mask = nullptr, exec::FlopMeter* meter = nullptr,
                              exec::Stage stage = exec::Stage::one);

// Aggregation: per head l, maps[l] * (values_input * w_v)_l; heads
// concatenated on the feature axis.
Tensor2 aggregate(std::span<const Tensor2> maps, const Tensor2& values_input, const EncoderWeights& w,
                  exec::FlopMeter* meter = nullptr, exec::Stage stage = exec::Stage::one);

// relu(x * w_1) * w_2.
Tensor2 mlp(const EncoderWeights& w, const Tensor2& x, exec::FlopMeter* meter = nullptr,
            exec::Stage stage = exec::Stage::one);

// generate + aggregate, keeping the maps.
AttentionResult attend(const EncoderWeights& w, const Tensor2& queries, const Tensor2& keys,
                       const Tensor2* mask = nullptr, exec::FlopMeter* meter = nullptr,
                       exec::Stage stage = exec::Stage::one);

// The full encoder a = MLP o attention. No residuals, normalization or
// biases; no output projection after the head concat.
Tensor2 encode(const EncoderWeights& w, const Tensor2& queries, const Tensor2& keys,
               const Tensor2* mask = nullptr, exec::FlopMeter* meter = nullptr,
               exec::Stage stage = exec::Stage::one);

} // namespace gsit::attn

#endif
