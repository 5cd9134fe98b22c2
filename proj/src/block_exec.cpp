#include "gsit/block_exec.hpp"

#include <cmath>

namespace gsit::exec {

using mask::Modality;

std::vector<RowGroup> row_groups(const mask::BlockPattern& pattern) {
    std::vector<RowGroup> groups;
    for (Modality i : mask::kModalities) {
        RowGroup g{i, {}};
        for (Modality j : mask::kModalities)
            if (pattern.allows(i, j)) g.cols.push_back(j);
        if (g.cols.empty())
            throw DegenerateRowError("row block has no allowed column block",
                                     static_cast<std::size_t>(i));
        groups.push_back(std::move(g));
    }
    return groups;
}

Tensor2 exec_stream(const attn::EncoderWeights& w, const Tensor2& v_m,
                    const mask::SegmentLayout& layout, const mask::BlockPattern& pattern,
                    FlopMeter* meter, Stage stage, MemMeter* mem) {
    const std::size_t d = w.width();
    if (v_m.rows() != layout.total()) throw ShapeError("exec_stream: sequence/layout mismatch");
    if (v_m.cols() != d) throw ShapeError("exec_stream: feature width mismatch");

    const std::vector<RowGroup> groups = row_groups(pattern);

    // Shared projections on the full sequence.
    const Tensor2 q = num::matmul(v_m, w.w_q);
    const Tensor2 k = num::matmul(v_m, w.w_k);
    const Tensor2 v = num::matmul(v_m, w.w_v);
    if (meter) meter->add(stage, Phase::qkv_projection, 3 * v_m.rows() * d * d);

    const std::size_t heads = w.heads;
    const std::size_t dh = w.head_dim();
    const double inv_scale = 1.0 / std::sqrt(static_cast<double>(dh));

    Tensor2 attended(layout.total(), d);
    for (const RowGroup& group : groups) {
        const auto [r0, r1] = layout.range(group.row);
        const std::size_t t_rows = r1 - r0;

        std::vector<Tensor2> k_blocks, v_blocks;
        for (Modality j : group.cols) {
            const auto [c0, c1] = layout.range(j);
            k_blocks.push_back(num::slice_rows(k, c0, c1));
            v_blocks.push_back(num::slice_rows(v, c0, c1));
        }
        const Tensor2 k_gather = num::concat_rows(k_blocks);
        const Tensor2 v_gather = num::concat_rows(v_blocks);
        const std::size_t t_cols = k_gather.rows();

        const Tensor2 q_rows = num::slice_rows(q, r0, r1);
        for (std::size_t l = 0; l < heads; ++l) {
            const Tensor2 ql = num::slice_cols(q_rows, l * dh, (l + 1) * dh);
            const Tensor2 kl = num::slice_cols(k_gather, l * dh, (l + 1) * dh);
            const Tensor2 g = num::softmax_rows(num::scale(num::matmul_nt(ql, kl), inv_scale));
            const Tensor2 vl = num::slice_cols(v_gather, l * dh, (l + 1) * dh);
            const Tensor2 out = num::matmul(g, vl);
            for (std::size_t r = 0; r < t_rows; ++r)
                for (std::size_t c = 0; c < dh; ++c) attended(r0 + r, l * dh + c) = out(r, c);
            if (meter) {
                meter->add(stage, Phase::map_generation, t_rows * t_cols * dh);
                meter->add(stage, Phase::scale, t_rows * t_cols);
                meter->add(stage, Phase::softmax, 2 * t_rows * t_cols);
                meter->add(stage, Phase::aggregation, t_rows * t_cols * dh);
            }
        }
        if (mem) {
            for (Modality j : group.cols) {
                const std::uint64_t block = static_cast<std::uint64_t>(heads) * t_rows * layout.length(j);
                mem->block_sum += block;
                if (block > mem->block_peak) mem->block_peak = block;
            }
        }
    }
    if (mem)
        mem->dense_total = static_cast<std::uint64_t>(heads) * layout.total() * layout.total();

    return attn::mlp(w, attended, meter, stage);
}

MemMeter memory_report(const mask::SegmentLayout& layout, const mask::BlockPattern& pattern,
                       std::size_t heads) {
    MemMeter m;
    m.dense_total = static_cast<std::uint64_t>(heads) * layout.total() * layout.total();
    for (const auto& [i, j] : pattern.allowed_pairs()) {
        const std::uint64_t block = static_cast<std::uint64_t>(heads) * layout.length(i) * layout.length(j);
        m.block_sum += block;
        if (block > m.block_peak) m.block_peak = block;
    }
    return m;
}

} // namespace gsit::exec
