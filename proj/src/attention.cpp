#include "gsit/attention.hpp"

#include <cmath>

namespace gsit::attn {

using exec::FlopMeter;
using exec::Phase;
using exec::Stage;

std::size_t EncoderWeights::param_count() const {
    return w_q.size() + w_k.size() + w_v.size() + w_1.size() + w_2.size();
}

void EncoderWeights::check() const {
    const std::size_t d = width();
    if (w_q.cols() != d || w_k.rows() != d || w_k.cols() != d || w_v.rows() != d || w_v.cols() != d)
        throw ShapeError("encoder projections must all be width x width");
    if (w_1.rows() != d || w_2.cols() != d || w_2.rows() != w_1.cols())
        throw ShapeError("encoder MLP shapes must be width x hidden and hidden x width");
    if (heads == 0 || d % heads != 0) throw ContractError("width must be divisible by the head count");
    if (hidden() < d) throw ContractError("MLP hidden width must be >= feature width");
}

EncoderWeights EncoderWeights::random(num::Rng& rng, std::size_t width, std::size_t hidden,
                                      std::size_t heads, double init_std) {
    EncoderWeights w;
    w.w_q = rng.normal_tensor(width, width, init_std);
    w.w_k = rng.normal_tensor(width, width, init_std);
    w.w_v = rng.normal_tensor(width, width, init_std);
    w.w_1 = rng.normal_tensor(width, hidden, init_std);
    w.w_2 = rng.normal_tensor(hidden, width, init_std);
    w.heads = heads;
    w.check();
    return w;
}

namespace {

std::uint64_t finite_mask_entries(const Tensor2* mask, std::size_t rows, std::size_t cols) {
    if (!mask) return static_cast<std::uint64_t>(rows) * cols;
    std::uint64_t n = 0;
    for (double v : mask->flat()) n += (v == 0.0) ? 1 : 0;
    return n;
}

} // namespace

std::vector<Tensor2> generate(const EncoderWeights& w, const Tensor2& queries, const Tensor2& keys,
                              const Tensor2* mask, FlopMeter* meter, Stage stage) {
    const std::size_t d = w.width();
    if (queries.cols() != d || keys.cols() != d) throw ShapeError("generate: feature width mismatch");
    if (mask && (mask->rows() != queries.rows() || mask->cols() != keys.rows()))
        throw ShapeError("generate: mask must be T_q x T_k");

    const Tensor2 q = num::matmul(queries, w.w_q);
    const Tensor2 k = num::matmul(keys, w.w_k);
    if (meter) meter->add(stage, Phase::qkv_projection, (queries.rows() + keys.rows()) * d * d);

    const std::size_t dh = w.head_dim();
    const double inv_scale = 1.0 / std::sqrt(static_cast<double>(dh));
    const std::uint64_t finite = finite_mask_entries(mask, queries.rows(), keys.rows());

    std::vector<Tensor2> maps;
    maps.reserve(w.heads);
    for (std::size_t l = 0; l < w.heads; ++l) {
        const Tensor2 ql = num::slice_cols(q, l * dh, (l + 1) * dh);
        const Tensor2 kl = num::slice_cols(k, l * dh, (l + 1) * dh);
        Tensor2 scores = num::scale(num::matmul_nt(ql, kl), inv_scale);
        if (meter) {
            meter->add(stage, Phase::map_generation, queries.rows() * keys.rows() * dh);
            meter->add(stage, Phase::scale, queries.rows() * keys.rows());
            meter->add(stage, Phase::softmax, 2 * finite);
        }
        maps.push_back(num::softmax_rows(scores, mask));
    }
    return maps;
}

Tensor2 aggregate(std::span<const Tensor2> maps, const Tensor2& values_input, const EncoderWeights& w,
                  FlopMeter* meter, Stage stage) {
    if (maps.size() != w.heads) throw ShapeError("aggregate: one map per head expected");
    const std::size_t d = w.width();
    if (values_input.cols() != d) throw ShapeError("aggregate: feature width mismatch");

    const Tensor2 v = num::matmul(values_input, w.w_v);
    if (meter) meter->add(stage, Phase::qkv_projection, values_input.rows() * d * d);

    const std::size_t dh = w.head_dim();
    std::vector<Tensor2> head_outputs;
    head_outputs.reserve(w.heads);
    for (std::size_t l = 0; l < w.heads; ++l) {
        const Tensor2& g = maps[l];
        if (g.cols() != values_input.rows()) throw ShapeError("aggregate: map/key length mismatch");
        const Tensor2 vl = num::slice_cols(v, l * dh, (l + 1) * dh);
        head_outputs.push_back(num::matmul(g, vl));
        if (meter) meter->add(stage, Phase::aggregation, g.rows() * g.cols() * dh);
    }
    return num::concat_cols(head_outputs);
}

Tensor2 mlp(const EncoderWeights& w, const Tensor2& x, FlopMeter* meter, Stage stage) {
    const Tensor2 h = num::relu(num::matmul(x, w.w_1));
    const Tensor2 y = num::matmul(h, w.w_2);
    if (meter) meter->add(stage, Phase::mlp, 2 * x.rows() * w.width() * w.hidden());
    return y;
}

AttentionResult attend(const EncoderWeights& w, const Tensor2& queries, const Tensor2& keys,
                       const Tensor2* mask, FlopMeter* meter, Stage stage) {
    AttentionResult res;
    res.maps = generate(w, queries, keys, mask, meter, stage);
    res.output = aggregate(res.maps, keys, w, meter, stage);
    return res;
}

Tensor2 encode(const EncoderWeights& w, const Tensor2& queries, const Tensor2& keys,
               const Tensor2* mask, FlopMeter* meter, Stage stage) {
    const AttentionResult res = attend(w, queries, keys, mask, meter, stage);
    return mlp(w, res.output, meter, stage);
}

} // namespace gsit::attn
