#ifndef GSIT_BLOCK_EXEC_HPP
#define GSIT_BLOCK_EXEC_HPP

#include <vector>

#include "gsit/attention.hpp"
#include "gsit/patterns.hpp"

namespace gsit::exec {

using num::Tensor2;

// One row block and the column blocks its softmax normalization spans,
// in fixed t, v, a order. Never empty.
struct RowGroup {
    mask::Modality row;
    std::vector<mask::Modality> cols;
};

// Row groups of a pattern; a row block with no allowed column throws
// DegenerateRowError.
std::vector<RowGroup> row_groups(const mask::BlockPattern& pattern);

// Block-sparse execution of one interlaced-masked attention stream:
// q/k/v are projected once on the full concatenated sequence, then each
// row group gathers its allowed column blocks, runs softmax across their
// concatenation, aggregates, and the assembled rows go through the MLP.
// Numerically identical to the dense masked encoder; meters record
// per-block counts only.
Tensor2 exec_stream(const attn::EncoderWeights& weights, const Tensor2& v_m,
                    const mask::SegmentLayout& layout, const mask::BlockPattern& pattern,
                    FlopMeter* meter = nullptr, Stage stage = Stage::one, MemMeter* mem = nullptr);

// Attention-map element counts of one stream for the given layout and
// pattern: dense heads*T_m^2 versus per-block sums and the peak block.
MemMeter memory_report(const mask::SegmentLayout& layout, const mask::BlockPattern& pattern,
                       std::size_t heads);

} // namespace gsit::exec

#endif
